# distances.py: Statistics of pooled wavelet coefficients.
# Zero-mean ML scale, excess kurtosis, and discrepancies between two
# zero-mean Gaussian densities (KL in closed form, L1 via the density
# crossing points, L2 and Linf on a dense symmetric grid).

import math

import numpy as np
from scipy.integrate import trapezoid
from scipy.stats import kurtosis, norm

from config import PDF_GRID_HALF_WIDTH, PDF_GRID_POINTS
from errors import InputError

METRICS = ("L1", "L2", "Linf")


def ml_sigma(coeffs) -> float:
    values = np.asarray(coeffs, dtype=np.float64).ravel()
    if values.size < 2:
        raise InputError("ML scale needs at least two coefficients.")
    return float(math.sqrt(np.mean(values**2)))


def excess_kurtosis(values) -> float:
    """m4 / m2^2 - 3 with central moments."""
    values = np.asarray(values, dtype=np.float64).ravel()
    if values.size < 4:
        raise InputError("Kurtosis needs at least four values.")
    if np.ptp(values) == 0.0:
        raise InputError("Kurtosis is undefined for zero variance.")
    return float(kurtosis(values, fisher=True, bias=True))


def _check_sigmas(sigma1: float, sigma2: float):
    if not (sigma1 > 0.0 and sigma2 > 0.0) or not math.isfinite(sigma1 * sigma2):
        raise InputError(f"Scales must be positive and finite, got {sigma1}, {sigma2}.")


def kl_gaussian_zero_mean(sigma1: float, sigma2: float) -> float:
    """KL(N(0, sigma1^2) || N(0, sigma2^2))."""
    _check_sigmas(sigma1, sigma2)
    value = math.log(sigma2 / sigma1) + sigma1**2 / (2.0 * sigma2**2) - 0.5
    return max(value, 0.0)


def _l1_distance(sigma1: float, sigma2: float) -> float:
    low, high = sorted((sigma1, sigma2))
    # The narrower density dominates on |x| < x*, where the two cross.
    crossing = math.sqrt(
        2.0 * low**2 * high**2 * math.log(high / low) / (high**2 - low**2)
    )
    return 4.0 * (norm.cdf(crossing / low) - norm.cdf(crossing / high))


def pdf_distance_zero_mean(sigma1: float, sigma2: float, metric: str) -> float:
    _check_sigmas(sigma1, sigma2)
    if metric not in METRICS:
        raise InputError(f"Unknown metric '{metric}'; use one of {METRICS}.")
    if sigma1 == sigma2:
        return 0.0

    if metric == "L1":
        return float(_l1_distance(sigma1, sigma2))

    half_width = PDF_GRID_HALF_WIDTH * max(sigma1, sigma2)
    grid = np.linspace(-half_width, half_width, PDF_GRID_POINTS)
    difference = norm.pdf(grid, scale=sigma1) - norm.pdf(grid, scale=sigma2)
    if metric == "L2":
        return float(math.sqrt(trapezoid(difference**2, grid)))
    return float(np.max(np.abs(difference)))
