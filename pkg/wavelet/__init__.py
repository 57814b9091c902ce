# wavelet: Haar analysis, level statistics and self-similarity measures.

from wavelet.distances import (
    excess_kurtosis,
    kl_gaussian_zero_mean,
    ml_sigma,
    pdf_distance_zero_mean,
)
from wavelet.haar import (
    ANALYSIS_2J,
    ORTHONORMAL,
    HaarLevel,
    WaveletPyramid,
    haar_1d,
    haar_pyramid,
)
from wavelet.selfsim import (
    LevelStats,
    SelfSimReport,
    aggregate_reports,
    level_stats,
    level_variance_ratio_check,
    self_similarity_report,
)

__all__ = [
    "ANALYSIS_2J",
    "ORTHONORMAL",
    "HaarLevel",
    "LevelStats",
    "SelfSimReport",
    "WaveletPyramid",
    "aggregate_reports",
    "excess_kurtosis",
    "haar_1d",
    "haar_pyramid",
    "kl_gaussian_zero_mean",
    "level_stats",
    "level_variance_ratio_check",
    "ml_sigma",
    "pdf_distance_zero_mean",
    "self_similarity_report",
]
