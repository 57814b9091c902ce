# seeding.py: Splits one run seed into independent per-stage seeds.
# Every random draw in the pipeline goes through a generator built here, so a
# single user seed reproduces a whole run.

import numpy as np

from config import SEED_STAGES
from errors import InputError


def derive_seed(base_seed: int, stage: str, index: int = 0) -> int:
    """Mixes a fixed stage index (and an optional sub-index) into `base_seed`."""
    if stage not in SEED_STAGES:
        raise InputError(f"Unknown seed stage '{stage}'.")
    if base_seed < 0:
        raise InputError("Seeds must be non-negative 64-bit integers.")
    sequence = np.random.SeedSequence([int(base_seed), SEED_STAGES[stage], int(index)])
    return int(sequence.generate_state(1, dtype=np.uint64)[0])


def stage_rng(base_seed: int, stage: str, index: int = 0) -> np.random.Generator:
    return np.random.default_rng(derive_seed(base_seed, stage, index))
