# textural.py: Textural view features from the texture layer.
# The layer is cut into non-overlapping patches, each patch gets its own
# variogram Hurst estimate, and the view is the mean and variance of those.

from typing import List

import numpy as np

from config import HURST_MAX_LAG, PATCH_SIZE
from errors import InputError
from fbm.estimation import estimate_hurst
from field_io.field import GrayField, extract_patches
from logger import logger


def patch_hurst_estimates(
    texture: GrayField, patch_size: int = PATCH_SIZE, max_lag: int = HURST_MAX_LAG
) -> List[float]:
    """Per-patch Ĥ over lags 1..min(max_lag, patch_size // 4); constant patches are skipped."""
    patches = extract_patches(texture, patch_size)
    max_lag = max(1, min(max_lag, patch_size // 4))

    estimates, skipped = [], 0
    for patch in patches:
        try:
            estimates.append(estimate_hurst(patch, max_lag).h_hat)
        except InputError:
            skipped += 1
    if skipped:
        logger.debug("Features", "Patches skipped.", {"skipped": skipped, "total": len(patches)})
    return estimates


def textural_features(
    texture: GrayField, patch_size: int = PATCH_SIZE, max_lag: int = HURST_MAX_LAG
) -> np.ndarray:
    estimates = patch_hurst_estimates(texture, patch_size, max_lag)
    if len(estimates) < 2:
        raise InputError(
            f"Textural features need at least 2 estimable {patch_size}x{patch_size} patches, "
            f"got {len(estimates)}."
        )
    values = np.asarray(estimates)
    return np.array([float(np.mean(values)), float(np.var(values))])
