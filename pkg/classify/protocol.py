# protocol.py: The repeated random-split evaluation protocol.
# Each repetition draws a fresh split from its own seed, trains the fused
# two-view model, and scores it next to three SVM baselines trained on the
# same SVM half: texture only, structure only, and the concatenated views.

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import partial
from typing import Dict, List, Sequence

import numpy as np

from classify.metrics import METRIC_NAMES, Metrics
from classify.two_view import TwoViewConfig, evaluate, train_two_view, train_view_svm
from errors import InputError
from features.dataset import TwoViewFeatures
from logger import logger

COLUMNS = ("T", "S", "TconcatS", "fused")


@dataclass(frozen=True)
class RepetitionResult:
    repetition: int
    seed: int
    metrics: Dict[str, Metrics]


@dataclass(frozen=True)
class RepeatSummary:
    repetitions: List[RepetitionResult]
    mean: Dict[str, Dict[str, float]]
    std: Dict[str, Dict[str, float]]

    def rows(self) -> List[List]:
        """One row per repetition: rep, seed, then every metric of every column."""
        out = []
        for result in self.repetitions:
            row = [result.repetition, result.seed]
            for column in COLUMNS:
                row.extend(result.metrics[column].scalars()[name] for name in METRIC_NAMES)
            out.append(row)
        return out

    @staticmethod
    def header() -> List[str]:
        return ["rep", "seed"] + [f"{column}_{name}" for column in COLUMNS for name in METRIC_NAMES]

    def plot_rows(self) -> List[List]:
        """Tidy (rep, column, accuracy) rows for accuracy-per-repetition plots."""
        return [
            [result.repetition, column, result.metrics[column].accuracy]
            for result in self.repetitions
            for column in COLUMNS
        ]


def run_repetition(
    repetition: int,
    rows: Sequence[TwoViewFeatures],
    k: int,
    config: TwoViewConfig,
    base_seed: int,
) -> RepetitionResult:
    seed = base_seed + repetition
    model = train_two_view(rows, k, config, seed)
    plan = model.plan
    svm_rows = [rows[i] for i in plan.svm_train]
    test_rows = [rows[i] for i in plan.test]
    metrics = {
        "T": train_view_svm(svm_rows, test_rows, "texture", k, config.svm),
        "S": train_view_svm(svm_rows, test_rows, "structure", k, config.svm),
        "TconcatS": train_view_svm(svm_rows, test_rows, "both", k, config.svm),
        "fused": evaluate(model, test_rows),
    }
    logger.info(
        "Protocol",
        "Repetition finished.",
        {"repetition": repetition, "seed": seed, "accuracy": {c: metrics[c].accuracy for c in COLUMNS}},
    )
    return RepetitionResult(repetition, seed, metrics)


def _aggregate(results: List[RepetitionResult], reducer) -> Dict[str, Dict[str, float]]:
    return {
        column: {
            name: float(reducer([r.metrics[column].scalars()[name] for r in results]))
            for name in METRIC_NAMES
        }
        for column in COLUMNS
    }


def repeat_eval(
    rows: Sequence[TwoViewFeatures],
    k: int,
    config: TwoViewConfig = TwoViewConfig(),
    repetitions: int = 10,
    base_seed: int = 0,
    workers: int = 1,
) -> RepeatSummary:
    if repetitions < 1:
        raise InputError("At least one repetition is required.")
    job = partial(run_repetition, rows=list(rows), k=k, config=config, base_seed=base_seed)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(job, range(repetitions)))
    else:
        results = [job(rep) for rep in range(repetitions)]

    summary = RepeatSummary(results, _aggregate(results, np.mean), _aggregate(results, np.std))
    logger.info("Protocol", "Repeated evaluation finished.", {"repetitions": repetitions, "mean": summary.mean})
    return summary
