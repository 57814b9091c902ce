# field.py: The GrayField value type and patch extraction.
# A GrayField is the carrier for input images, their structure and texture
# layers, and synthetic fBm fields. Its pixel array is read-only so stages
# can never mutate their inputs.

from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from errors import InputError


@dataclass(frozen=True)
class Roi:
    """Axis-aligned region of interest in pixel coordinates."""

    x: int
    y: int
    width: int
    height: int

    def __post_init__(self):
        if self.x < 0 or self.y < 0 or self.width <= 0 or self.height <= 0:
            raise InputError(f"Invalid ROI rectangle: {self}")


@dataclass(frozen=True, eq=False)
class GrayField:
    """A 2D real-valued grayscale field stored row-major as (height, width)."""

    data: np.ndarray

    def __post_init__(self):
        array = np.array(self.data, dtype=np.float64, copy=True)
        if array.ndim != 2 or array.shape[0] < 1 or array.shape[1] < 1:
            raise InputError(f"GrayField needs a non-empty 2D array, got shape {array.shape}.")
        if not np.all(np.isfinite(array)):
            raise InputError("GrayField values must be finite.")
        array.setflags(write=False)
        object.__setattr__(self, "data", array)

    @property
    def width(self) -> int:
        return self.data.shape[1]

    @property
    def height(self) -> int:
        return self.data.shape[0]

    @property
    def shape(self) -> Tuple[int, int]:
        return self.data.shape

    def values(self) -> List[float]:
        """Row-major flat view of the pixel values."""
        return self.data.ravel().tolist()

    def __eq__(self, other) -> bool:
        return isinstance(other, GrayField) and np.array_equal(self.data, other.data)

    def __repr__(self) -> str:
        return f"GrayField(width={self.width}, height={self.height})"


def extract_patches(field: GrayField, size: int, stride: Optional[int] = None) -> List[GrayField]:
    """
    Cuts `size`x`size` windows left-to-right, top-to-bottom. Partial windows
    at the right and bottom edges are dropped.
    """
    stride = size if stride is None else stride
    if size <= 0 or stride <= 0:
        raise InputError("Patch size and stride must be positive.")
    if size > min(field.width, field.height):
        raise InputError(
            f"Patch size {size} exceeds field dimensions {field.width}x{field.height}."
        )

    patches = []
    for top in range(0, field.height - size + 1, stride):
        for left in range(0, field.width - size + 1, stride):
            patches.append(GrayField(field.data[top : top + size, left : left + size]))
    return patches


def crop(field: GrayField, roi: Optional[Roi]) -> GrayField:
    if roi is None:
        return field
    if roi.x + roi.width > field.width or roi.y + roi.height > field.height:
        raise InputError(
            f"ROI {roi} leaves the {field.width}x{field.height} field."
        )
    return GrayField(field.data[roi.y : roi.y + roi.height, roi.x : roi.x + roi.width])
