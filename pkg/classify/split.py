# split.py: The three-way random split of a dataset.
# Half of the examples train the per-view SVMs, a fixed-size test set is
# held out, and the remainder trains the fusion network, so the network
# never sees an SVM training example.

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from config import PROTOCOL_REFERENCE_SIZE, PROTOCOL_REFERENCE_TEST, SPLIT_MAX_RESAMPLES
from errors import InputError
from logger import logger
from utils.seeding import stage_rng


@dataclass(frozen=True)
class SplitPlan:
    svm_train: List[int]
    nn_train: List[int]
    test: List[int]
    seed: int

    def __post_init__(self):
        sets = [set(self.svm_train), set(self.nn_train), set(self.test)]
        if sum(len(s) for s in sets) != len(sets[0] | sets[1] | sets[2]):
            raise InputError("Split index sets overlap.")

    @property
    def size(self) -> int:
        return len(self.svm_train) + len(self.nn_train) + len(self.test)


def default_test_count(n: int) -> int:
    if n == PROTOCOL_REFERENCE_SIZE:
        return PROTOCOL_REFERENCE_TEST
    return int(math.ceil(n * PROTOCOL_REFERENCE_TEST / PROTOCOL_REFERENCE_SIZE))


def make_split(
    n: int,
    test_count: Optional[int],
    seed: int,
    labels: Optional[Sequence[int]] = None,
    class_count: Optional[int] = None,
) -> SplitPlan:
    """
    svm_train gets floor(n/2) examples, test gets `test_count`, nn_train the
    rest. With labels, the permutation is redrawn until svm_train holds
    every class.
    """
    test_count = default_test_count(n) if test_count is None else test_count
    if test_count < 1:
        raise InputError("The test set needs at least one example.")
    half = n // 2
    if n < test_count + 4 or n - half - test_count < 1:
        raise InputError(f"Dataset of {n} examples is too small for a test set of {test_count}.")

    required = None
    if labels is not None:
        y = np.asarray(labels, dtype=np.int64)
        if y.shape != (n,):
            raise InputError("Labels and dataset size differ.")
        k = int(y.max()) + 1 if class_count is None else class_count
        required = set(range(k))

    for attempt in range(SPLIT_MAX_RESAMPLES):
        order = stage_rng(seed, "split", attempt).permutation(n)
        svm_train = order[:half]
        if required is None or set(y[svm_train].tolist()) >= required:
            plan = SplitPlan(
                svm_train=sorted(svm_train.tolist()),
                nn_train=sorted(order[half + test_count :].tolist()),
                test=sorted(order[half : half + test_count].tolist()),
                seed=seed,
            )
            if attempt:
                logger.debug("Protocol", "Split resampled for class coverage.", {"attempts": attempt + 1})
            return plan
    raise InputError(
        f"No split in {SPLIT_MAX_RESAMPLES} draws gives the SVM training set every class."
    )
