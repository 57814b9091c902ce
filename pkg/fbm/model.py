# model.py: The isotropic fBm model.
# FbmParams holds (H, sigma_H); the covariance and structure function
# evaluate the model for points and lags on the plane.

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy.spatial.distance import cdist
from scipy.special import gamma

from config import HURST_HALF_LIMIT_WINDOW
from errors import InputError


def sigma_h_from_sigma_w(hurst: float, sigma_w: float) -> float:
    """
    sigma_H^2 = sigma_w^2 cos(pi H) Gamma(1 - 2H) / (2 pi H).
    cos(pi H) Gamma(1 - 2H) -> pi/2 as H -> 1/2, giving sigma_H^2 = sigma_w^2 / 2.
    """
    _check_hurst(hurst)
    if sigma_w <= 0:
        raise InputError("sigma_w must be positive.")
    if abs(hurst - 0.5) < HURST_HALF_LIMIT_WINDOW:
        return sigma_w / math.sqrt(2.0)
    factor = math.cos(math.pi * hurst) * gamma(1.0 - 2.0 * hurst) / (2.0 * math.pi * hurst)
    return sigma_w * math.sqrt(factor)


def _check_hurst(hurst: float):
    if not 0.0 < hurst < 1.0 or not math.isfinite(hurst):
        raise InputError(f"Hurst exponent must lie in (0,1), got {hurst}.")


@dataclass(frozen=True)
class FbmParams:
    hurst: float
    sigma_h: float = 1.0
    sigma_w: Optional[float] = None

    def __post_init__(self):
        _check_hurst(self.hurst)
        if not self.sigma_h > 0 or not math.isfinite(self.sigma_h):
            raise InputError("sigma_h must be positive and finite.")
        if self.sigma_w is not None:
            expected = sigma_h_from_sigma_w(self.hurst, self.sigma_w)
            if abs(expected**2 - self.sigma_h**2) > 1e-9 * expected**2:
                raise InputError("sigma_h is inconsistent with sigma_w for this Hurst exponent.")

    @classmethod
    def from_sigma_w(cls, hurst: float, sigma_w: float) -> "FbmParams":
        return cls(hurst, sigma_h_from_sigma_w(hurst, sigma_w), sigma_w)


def fbm_covariance_2d(params: FbmParams, x: Sequence[float], y: Sequence[float]) -> float:
    """(sigma_H^2 / 2)(|x|^2H + |y|^2H - |x - y|^2H)."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    two_h = 2.0 * params.hurst
    value = (
        np.linalg.norm(x) ** two_h + np.linalg.norm(y) ** two_h - np.linalg.norm(x - y) ** two_h
    )
    return float(0.5 * params.sigma_h**2 * value)


def covariance_matrix(params: FbmParams, points: np.ndarray) -> np.ndarray:
    """Covariance of B_H over an (m, d) array of points."""
    points = np.asarray(points, dtype=np.float64)
    two_h = 2.0 * params.hurst
    norms = np.linalg.norm(points, axis=1) ** two_h
    cov = cdist(points, points)
    np.power(cov, two_h, out=cov)
    np.subtract(norms[:, None], cov, out=cov)
    cov += norms[None, :]
    cov *= 0.5 * params.sigma_h**2
    return cov


def structure_function(params: FbmParams, d1: float, d2: float) -> float:
    """Variance of increments at lag (d1, d2): sigma_H^2 r^2H."""
    r = math.hypot(d1, d2)
    if r == 0.0:
        raise InputError("Structure function is undefined at zero lag.")
    return params.sigma_h**2 * r ** (2.0 * params.hurst)
