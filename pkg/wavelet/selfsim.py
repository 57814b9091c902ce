# selfsim.py: Wavelet-domain self-similarity assessment.
# For a self-similar field the detail coefficients of adjacent levels follow
# zero-mean Gaussian laws that differ only by a 2^H scale. The report measures
# the distance between the raw level laws, with the 2^-H rescaled comparison
# kept as a diagnostic.

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np

from config import (
    HURST_MAX_LAG,
    RATIO_CHECK_FIRST_LEVEL,
    RATIO_CHECK_LEVELS,
    RATIO_CHECK_MIN_LENGTH,
    SELFSIM_LEVELS,
)
from errors import InputError
from fbm.estimation import estimate_hurst
from field_io.field import GrayField
from logger import logger
from wavelet.distances import (
    excess_kurtosis,
    kl_gaussian_zero_mean,
    ml_sigma,
    pdf_distance_zero_mean,
)
from wavelet.haar import ANALYSIS_2J, WaveletPyramid, haar_1d, haar_pyramid


@dataclass(frozen=True)
class LevelStats:
    level: int
    sigma_hat: float
    count: int
    excess_kurtosis: Optional[float]


@dataclass(frozen=True)
class SelfSimReport:
    kl_12: float
    l1_13: float
    l2_13: float
    linf_13: float
    variance_ratios: List[float]
    kl_12_rescaled: float = 0.0
    hurst_used: float = 0.5
    level_stats: List[LevelStats] = field(default_factory=list)
    rescaled_sigmas: List[float] = field(default_factory=list)

    def scalar_items(self) -> Dict[str, float]:
        return {
            "kl_12": self.kl_12,
            "kl_12_rescaled": self.kl_12_rescaled,
            "l1_13": self.l1_13,
            "l2_13": self.l2_13,
            "linf_13": self.linf_13,
            "hurst_used": self.hurst_used,
        }


def level_stats(pyramid: WaveletPyramid) -> List[LevelStats]:
    stats = []
    for level in pyramid.levels:
        pooled = level.pooled_details()
        try:
            kurt = excess_kurtosis(pooled)
        except InputError:
            kurt = None
        stats.append(LevelStats(level.level, ml_sigma(pooled), int(pooled.size), kurt))
    return stats


def self_similarity_report(field: GrayField, hurst: Optional[float] = None) -> SelfSimReport:
    """
    Three-level analysis-2j pyramid with pooled orientations. kl_12 and the
    level 1-3 distances compare the raw level laws; kl_12_rescaled compares
    level 1 with level 2 scaled by 2^-H, H being estimated from the field's
    variogram unless given.
    """
    pyramid = haar_pyramid(field, SELFSIM_LEVELS, ANALYSIS_2J)
    stats = level_stats(pyramid)
    sigmas = [s.sigma_hat for s in stats]
    if min(sigmas) <= 0.0:
        raise InputError("Degenerate field: a wavelet level has zero spread.")

    if hurst is None:
        max_lag = min(HURST_MAX_LAG, min(field.width, field.height) // 4)
        hurst = estimate_hurst(field, max_lag).h_hat
    elif not 0.0 < hurst < 1.0:
        raise InputError(f"Hurst exponent must lie in (0,1), got {hurst}.")

    rescaled = [sigma * 2.0 ** (-hurst * j) for j, sigma in enumerate(sigmas)]
    report = SelfSimReport(
        kl_12=kl_gaussian_zero_mean(sigmas[0], sigmas[1]),
        l1_13=pdf_distance_zero_mean(sigmas[0], sigmas[2], "L1"),
        l2_13=pdf_distance_zero_mean(sigmas[0], sigmas[2], "L2"),
        linf_13=pdf_distance_zero_mean(sigmas[0], sigmas[2], "Linf"),
        variance_ratios=[(sigmas[j + 1] / sigmas[j]) ** 2 for j in range(len(sigmas) - 1)],
        kl_12_rescaled=kl_gaussian_zero_mean(rescaled[0], rescaled[1]),
        hurst_used=float(hurst),
        level_stats=stats,
        rescaled_sigmas=rescaled,
    )
    logger.debug("Wavelet", "Self-similarity report computed.", report.scalar_items())
    return report


def aggregate_reports(reports: Sequence[SelfSimReport]) -> Dict[str, float]:
    """Mean of every scalar entry across per-image reports."""
    if not reports:
        raise InputError("Nothing to aggregate.")
    keys = reports[0].scalar_items().keys()
    return {key: float(np.mean([r.scalar_items()[key] for r in reports])) for key in keys}


def level_variance_ratio_check(
    signal,
    hurst: Optional[float],
    levels: int = RATIO_CHECK_LEVELS,
    first_level: int = RATIO_CHECK_FIRST_LEVEL,
    normalization: str = ANALYSIS_2J,
) -> List[float]:
    """
    Var(level j+1) / Var(level j) for j = first_level .. levels-1. Under the
    analysis-2j convention fBm gives 2^2H; orthonormal white noise gives 1.
    The finest levels of a sampled signal are skipped by default because
    they are biased relative to the continuous-time coefficients.
    """
    values = np.asarray(signal, dtype=np.float64)
    if values.ndim != 1 or values.size < RATIO_CHECK_MIN_LENGTH:
        raise InputError(f"Signal must be 1D with at least {RATIO_CHECK_MIN_LENGTH} samples.")
    if not 1 <= first_level < levels:
        raise InputError("first_level must lie in 1..levels-1.")

    variances = [np.mean(d**2) for d in haar_1d(values, levels, normalization)]
    if min(variances) <= 0.0:
        raise InputError("Degenerate signal: a level has zero variance.")
    ratios = [float(variances[j] / variances[j - 1]) for j in range(first_level, levels)]
    if hurst is not None:
        logger.debug(
            "Wavelet", "Level variance ratios.", {"ratios": ratios, "expected": 2.0 ** (2 * hurst)}
        )
    return ratios
