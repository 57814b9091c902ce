# synthesis.py: Sampling fBm fields and signals.
# `synth_fbm_exact` factors the full grid covariance (desk-scale oracle),
# `synth_fbm_spectral` uses circulant embedding of a compactly supported
# covariance whose increments match fBm on the output square, and
# `synth_fbm_1d_exact` samples 1D fBm for the scale-invariance checks.

import math
from functools import lru_cache

import numpy as np
from scipy.linalg import LinAlgError, cholesky

from config import (
    EXACT_SYNTH_JITTER,
    EXACT_SYNTH_MAX_SIDE,
    SPECTRAL_NEGATIVE_EIGEN_TOLERANCE,
    SPECTRAL_SUPPORT_RADIUS,
)
from errors import InputError, NumericalError
from fbm.model import FbmParams, covariance_matrix
from field_io.field import GrayField
from logger import logger


def _cholesky_with_jitter(cov: np.ndarray, label: str) -> np.ndarray:
    """Lower Cholesky factor; one retry with a small diagonal jitter."""
    try:
        return cholesky(cov, lower=True, overwrite_a=False, check_finite=False)
    except LinAlgError:
        jitter = EXACT_SYNTH_JITTER * np.trace(cov) / cov.shape[0]
        logger.warning(
            "FbmSynthesis",
            "Covariance factorization failed, retrying with jitter.",
            {"matrix": label, "jitter": jitter},
        )
    try:
        return cholesky(
            cov + jitter * np.eye(cov.shape[0]), lower=True, check_finite=False
        )
    except LinAlgError as e:
        raise NumericalError(
            f"Covariance for {label} is not positive definite even after jitter."
        ) from e


@lru_cache(maxsize=2)
def _grid_factor(hurst: float, n: int) -> np.ndarray:
    # Every grid point except the pinned origin, as (x=column, y=row).
    rows, cols = np.divmod(np.arange(1, n * n), n)
    points = np.column_stack([cols, rows]).astype(np.float64)
    factor = _cholesky_with_jitter(
        covariance_matrix(FbmParams(hurst, 1.0), points), f"{n}x{n} grid, H={hurst}"
    )
    factor.setflags(write=False)
    return factor


@lru_cache(maxsize=2)
def _line_factor(hurst: float, n: int) -> np.ndarray:
    t = np.arange(1, n + 1, dtype=np.float64)
    two_h = 2.0 * hurst
    cov = 0.5 * (
        t[:, None] ** two_h + t[None, :] ** two_h - np.abs(np.subtract.outer(t, t)) ** two_h
    )
    factor = _cholesky_with_jitter(cov, f"1D length {n}, H={hurst}")
    factor.setflags(write=False)
    return factor


def synth_fbm_exact(params: FbmParams, n: int, seed: int) -> GrayField:
    """Exact fBm on the unit-spaced n x n grid with B(0,0) = 0."""
    if n < 2:
        raise InputError("Grid side must be at least 2.")
    if n > EXACT_SYNTH_MAX_SIDE:
        raise InputError(
            f"Exact synthesis supports n <= {EXACT_SYNTH_MAX_SIDE}; use the spectral method."
        )
    factor = _grid_factor(float(params.hurst), int(n))
    rng = np.random.default_rng(seed)
    values = np.zeros(n * n)
    values[1:] = params.sigma_h * (factor @ rng.standard_normal(n * n - 1))
    return GrayField(values.reshape(n, n))


def synth_fbm_1d_exact(hurst: float, n: int, seed: int, sigma_h: float = 1.0) -> np.ndarray:
    """Exact 1D fBm sampled at t = 1..n."""
    FbmParams(hurst, sigma_h)
    if n < 2:
        raise InputError("Signal length must be at least 2.")
    factor = _line_factor(float(hurst), int(n))
    rng = np.random.default_rng(seed)
    return sigma_h * (factor @ rng.standard_normal(n))


def _embedding_covariance(r: np.ndarray, alpha: float, radius: float):
    """
    Compactly supported stationary covariance whose variogram equals
    2 r^alpha - 2 c2 r^2 for r <= 1. Returns (values, c2).
    """
    if alpha <= 1.5:
        beta = 0.0
        c2 = alpha / 2.0
        c0 = 1.0 - alpha / 2.0
    else:
        beta = alpha * (2.0 - alpha) / (3.0 * radius * (radius**2 - 1.0))
        c2 = (alpha - beta * (radius - 1.0) ** 2 * (radius + 2.0)) / 2.0
        c0 = beta * (radius - 1.0) ** 3 + 1.0 - c2

    values = np.zeros_like(r)
    inner = r <= 1.0
    values[inner] = c0 - r[inner] ** alpha + c2 * r[inner] ** 2
    if beta > 0.0:
        outer = (r > 1.0) & (r <= radius)
        values[outer] = beta * (radius - r[outer]) ** 3 / r[outer]
    return values, c2


def synth_fbm_spectral(params: FbmParams, n: int, seed: int) -> GrayField:
    """
    Circulant-embedding synthesis for power-of-two n. The output square is
    placed on an embedding grid whose spacing makes its diagonal length 1,
    where the embedded covariance reproduces fBm increments; the result is
    then rescaled to unit pixel spacing.
    """
    if n < 2 or n & (n - 1):
        raise InputError(f"Spectral synthesis needs a power-of-two side, got {n}.")

    alpha = 2.0 * params.hurst
    radius = SPECTRAL_SUPPORT_RADIUS
    delta = 1.0 / (math.sqrt(2.0) * (n - 1))
    m = int(math.ceil(radius / delta)) + 1

    coords = np.arange(m) * delta
    first_block, c2 = _embedding_covariance(np.hypot(coords[None, :], coords[:, None]), alpha, radius)
    circulant = np.block(
        [
            [first_block, first_block[:, -2:0:-1]],
            [first_block[-2:0:-1, :], first_block[-2:0:-1, -2:0:-1]],
        ]
    )
    eigen = np.real(np.fft.fft2(circulant)) / circulant.size
    floor = -SPECTRAL_NEGATIVE_EIGEN_TOLERANCE * eigen.max()
    if eigen.min() < floor:
        raise NumericalError(
            f"Circulant embedding is not positive semi-definite (min eigenvalue {eigen.min():.3e})."
        )
    scale = np.sqrt(np.clip(eigen, 0.0, None))

    rng = np.random.default_rng(seed)
    noise = rng.standard_normal((2,) + circulant.shape)
    spectrum = np.fft.fft2(scale * (noise[0] + 1j * noise[1]))
    field = np.real(spectrum[:n, :n])
    field = field - field[0, 0]

    drift = rng.standard_normal(2)
    grid = np.arange(n) * delta
    field = field + math.sqrt(2.0 * c2) * (grid[None, :] * drift[0] + grid[:, None] * drift[1])

    # Increment variance is 2 r^alpha in embedding units.
    field *= params.sigma_h / math.sqrt(2.0) * delta ** (-params.hurst)
    logger.debug(
        "FbmSynthesis",
        "Spectral field synthesized.",
        {"n": n, "hurst": params.hurst, "embedding_side": circulant.shape[0]},
    )
    return GrayField(field)
