# features: textural and structural view features.

from features.dataset import (
    TwoViewFeatures,
    class_count_of,
    entry_features,
    extract_dataset_features,
    feature_matrix,
    read_features_csv,
    write_features_csv,
)
from features.phase_congruency import PcConfig, noise_threshold, phase_congruency, structural_feature_pc
from features.sth import SthConfig, dark_components, hist_equalize, quantize, sth_area
from features.textural import patch_hurst_estimates, textural_features

__all__ = [
    "PcConfig",
    "SthConfig",
    "TwoViewFeatures",
    "class_count_of",
    "dark_components",
    "entry_features",
    "extract_dataset_features",
    "feature_matrix",
    "hist_equalize",
    "noise_threshold",
    "patch_hurst_estimates",
    "phase_congruency",
    "quantize",
    "read_features_csv",
    "sth_area",
    "structural_feature_pc",
    "textural_features",
    "write_features_csv",
]
