# synthetic.py: A two-view dataset with complementary views.
# Classes come in groups of two per view. The texture view pairs classes
# (0,1), (2,3), ... and the structure view pairs c with c + k/2. Groups are
# far apart; within a group the two classes overlap, so each view alone
# is about 75% accurate while the pair of group memberships fixes the class.

from typing import List

import numpy as np

from errors import InputError
from features.dataset import TwoViewFeatures
from utils.seeding import stage_rng

GROUP_SPACING = 10.0
# Offset between the two classes of a group, in noise standard deviations;
# Phi(0.674) = 0.75 is the single-view Bayes accuracy.
WITHIN_GROUP_OFFSET = 2 * 0.674
# Affine map into the valid feature ranges (mean Hurst in (0,1), phi_s >= 0).
FEATURE_SCALE = 0.01


def _view(group: int, position: int, groups: int, rng: np.random.Generator) -> np.ndarray:
    centre = np.array(
        [(group - (groups - 1) / 2.0) * GROUP_SPACING, (position - 0.5) * WITHIN_GROUP_OFFSET]
    )
    return centre + rng.standard_normal(2)


def make_complementary_views(k: int, n: int, seed: int) -> List[TwoViewFeatures]:
    """n examples in class order 0,1,...,k-1,0,1,... (labels balanced)."""
    if k < 4 or k % 2:
        raise InputError("Complementary views need an even k >= 4.")
    if n < 2 * k:
        raise InputError(f"Need at least {2 * k} examples for k={k}.")
    rng = stage_rng(seed, "synthetic_dataset")
    half = k // 2

    rows = []
    for index in range(n):
        label = index % k
        texture = _view(label // 2, label % 2, half, rng)
        structure = _view(label % half, label // half, half, rng)
        phi_t = np.clip(0.5 + FEATURE_SCALE * texture, 1e-3, 1.0 - 1e-3)
        phi_s = np.maximum(1.0 + FEATURE_SCALE * structure, 0.0)
        rows.append(TwoViewFeatures(f"synthetic/{index:05d}", phi_t, phi_s, label))
    return rows
