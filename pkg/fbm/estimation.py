# estimation.py: Hurst exponent estimation by variogram regression.
# The empirical increment variance v(r) (horizontal and vertical increments
# averaged) follows C r^2H for fBm, so H is half the log-log slope.

from dataclasses import dataclass, field
from typing import List

import numpy as np
from scipy.stats import linregress

from config import HURST_CLAMP, HURST_MAX_LAG, HURST_MIN_FIELD_SIDE, HURST_MIN_LAGS
from errors import InputError
from field_io.field import GrayField
from logger import logger


@dataclass(frozen=True)
class HurstEstimate:
    h_hat: float
    slope: float
    intercept: float
    r_squared: float
    lags_used: List[float]
    raw_slope: float = 0.0
    clamped: bool = False
    variances: List[float] = field(default_factory=list)

    def summary(self) -> dict:
        return {
            "h_hat": self.h_hat,
            "slope": self.slope,
            "intercept": self.intercept,
            "r_squared": self.r_squared,
            "lags_used": self.lags_used,
        }


def increment_variances(data: np.ndarray, max_lag: int) -> np.ndarray:
    """Mean squared increment per integer lag 1..max_lag, axis-averaged."""
    variances = np.empty(max_lag)
    for r in range(1, max_lag + 1):
        horizontal = np.mean((data[:, r:] - data[:, :-r]) ** 2)
        vertical = np.mean((data[r:, :] - data[:-r, :]) ** 2)
        variances[r - 1] = 0.5 * (horizontal + vertical)
    return variances


def estimate_hurst(field: GrayField, max_lag: int = HURST_MAX_LAG) -> HurstEstimate:
    side = min(field.width, field.height)
    if side < HURST_MIN_FIELD_SIDE:
        raise InputError(f"Hurst estimation needs at least an 8x8 field, got {field.width}x{field.height}.")
    if max_lag < 1 or 4 * max_lag > side:
        raise InputError(f"max_lag {max_lag} must lie in 1..{side // 4} for this field.")

    variances = increment_variances(field.data, max_lag)
    if not np.any(variances > 0.0):
        raise InputError("Constant field: increment variance is zero at every lag.")

    lags = np.arange(1, max_lag + 1, dtype=np.float64)
    usable = variances > 0.0
    if usable.sum() < HURST_MIN_LAGS:
        raise InputError(
            f"Only {int(usable.sum())} lags with positive variance; at least {HURST_MIN_LAGS} are needed."
        )

    fit = linregress(np.log(lags[usable]), np.log(variances[usable]))
    raw_h = fit.slope / 2.0
    low, high = HURST_CLAMP
    h_hat = float(min(max(raw_h, low), high))
    clamped = h_hat != raw_h
    if clamped:
        logger.debug("HurstEstimator", "Estimate clamped.", {"raw_h": raw_h, "h_hat": h_hat})

    return HurstEstimate(
        h_hat=h_hat,
        slope=2.0 * h_hat,
        intercept=float(fit.intercept),
        r_squared=float(min(max(fit.rvalue**2, 0.0), 1.0)),
        lags_used=lags[usable].tolist(),
        raw_slope=float(fit.slope),
        clamped=clamped,
        variances=variances.tolist(),
    )
