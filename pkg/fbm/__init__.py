# fbm: fractional Brownian motion model, synthesis and Hurst estimation.

from fbm.estimation import HurstEstimate, estimate_hurst, increment_variances
from fbm.model import (
    FbmParams,
    covariance_matrix,
    fbm_covariance_2d,
    sigma_h_from_sigma_w,
    structure_function,
)
from fbm.synthesis import synth_fbm_1d_exact, synth_fbm_exact, synth_fbm_spectral

__all__ = [
    "FbmParams",
    "HurstEstimate",
    "covariance_matrix",
    "estimate_hurst",
    "fbm_covariance_2d",
    "increment_variances",
    "sigma_h_from_sigma_w",
    "structure_function",
    "synth_fbm_1d_exact",
    "synth_fbm_exact",
    "synth_fbm_spectral",
]
