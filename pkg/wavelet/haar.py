# haar.py: Haar multiresolution analysis of fields and signals.
# Two normalizations are carried explicitly: "orthonormal" (energy preserving)
# and "analysis-2j", the 2^j-weighted convention under which adjacent-level
# detail variances of fBm differ by exactly 2^2H.

import math
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from errors import InputError
from field_io.field import GrayField

ORTHONORMAL = "orthonormal"
ANALYSIS_2J = "analysis-2j"
NORMALIZATIONS = (ORTHONORMAL, ANALYSIS_2J)

# Per-step divisor of the 2x2 sums and differences.
_DIVISOR_2D = {ORTHONORMAL: 2.0, ANALYSIS_2J: 4.0}
_DIVISOR_1D = {ORTHONORMAL: math.sqrt(2.0), ANALYSIS_2J: 2.0}


@dataclass(frozen=True)
class HaarLevel:
    level: int
    approximation: np.ndarray
    horizontal: np.ndarray
    vertical: np.ndarray
    diagonal: np.ndarray

    def details(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        return self.horizontal, self.vertical, self.diagonal

    def pooled_details(self) -> np.ndarray:
        return np.concatenate([plane.ravel() for plane in self.details()])


@dataclass(frozen=True)
class WaveletPyramid:
    normalization: str
    levels: List[HaarLevel]

    @property
    def depth(self) -> int:
        return len(self.levels)

    def level(self, j: int) -> HaarLevel:
        if not 1 <= j <= self.depth:
            raise InputError(f"Level {j} outside 1..{self.depth}.")
        return self.levels[j - 1]

    def energy(self) -> float:
        """Sum of squares of every detail coefficient plus the coarsest approximation."""
        total = sum(float(np.sum(level.pooled_details() ** 2)) for level in self.levels)
        return total + float(np.sum(self.levels[-1].approximation ** 2))


def _check_normalization(normalization: str):
    if normalization not in NORMALIZATIONS:
        raise InputError(f"Unknown normalization '{normalization}'; use one of {NORMALIZATIONS}.")


def haar_step(plane: np.ndarray, normalization: str = ORTHONORMAL) -> Tuple[np.ndarray, ...]:
    """
    One separable Haar step on [[a, b], [c, d]] blocks. Returns
    (approximation, horizontal, vertical, diagonal). An odd trailing row or
    column is dropped.
    """
    _check_normalization(normalization)
    rows, cols = plane.shape[0] // 2 * 2, plane.shape[1] // 2 * 2
    plane = plane[:rows, :cols]
    a = plane[0::2, 0::2]
    b = plane[0::2, 1::2]
    c = plane[1::2, 0::2]
    d = plane[1::2, 1::2]
    divisor = _DIVISOR_2D[normalization]
    approximation = (a + b + c + d) / divisor
    horizontal = (a - b + c - d) / divisor
    vertical = (a + b - c - d) / divisor
    diagonal = (a - b - c + d) / divisor
    return approximation, horizontal, vertical, diagonal


def haar_pyramid(field: GrayField, levels: int, normalization: str = ORTHONORMAL) -> WaveletPyramid:
    _check_normalization(normalization)
    if levels < 1:
        raise InputError("A pyramid needs at least one level.")
    if min(field.width, field.height) < 2**levels:
        raise InputError(
            f"A {levels}-level pyramid needs both sides >= {2**levels}, "
            f"got {field.width}x{field.height}."
        )

    result = []
    plane = field.data
    for j in range(1, levels + 1):
        approximation, horizontal, vertical, diagonal = haar_step(plane, normalization)
        result.append(HaarLevel(j, approximation, horizontal, vertical, diagonal))
        plane = approximation
    return WaveletPyramid(normalization, result)


def haar_1d(signal, levels: int, normalization: str = ANALYSIS_2J) -> List[np.ndarray]:
    """Per-level detail coefficients of a 1D signal, finest level first."""
    _check_normalization(normalization)
    values = np.asarray(signal, dtype=np.float64)
    if values.ndim != 1:
        raise InputError("haar_1d expects a 1D signal.")
    if levels < 1 or values.size < 2**levels:
        raise InputError(f"A signal of length {values.size} cannot support {levels} levels.")

    divisor = _DIVISOR_1D[normalization]
    details = []
    for _ in range(levels):
        values = values[: values.size // 2 * 2]
        even, odd = values[0::2], values[1::2]
        details.append((even - odd) / divisor)
        values = (even + odd) / divisor
    return details
