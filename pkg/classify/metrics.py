# metrics.py: Classification metrics from a confusion matrix.
# Binary problems score class 1 as positive; with more classes precision,
# recall, specificity and F-measure are macro-averaged one-vs-rest.

from dataclasses import dataclass
from typing import Dict, List, Sequence

import numpy as np

from errors import InputError

METRIC_NAMES = ("accuracy", "precision", "recall", "specificity", "f_measure")


@dataclass(frozen=True)
class Metrics:
    accuracy: float
    precision: float
    recall: float
    specificity: float
    f_measure: float
    confusion: List[List[int]]

    def scalars(self) -> Dict[str, float]:
        return {name: getattr(self, name) for name in METRIC_NAMES}


def _ratio(numerator: float, denominator: float) -> float:
    return numerator / denominator if denominator > 0 else 0.0


def _harmonic(precision: float, recall: float) -> float:
    return _ratio(2.0 * precision * recall, precision + recall)


def confusion_matrix(y_true: Sequence[int], y_pred: Sequence[int], k: int) -> np.ndarray:
    """Rows are true classes, columns predictions."""
    matrix = np.zeros((k, k), dtype=np.int64)
    np.add.at(matrix, (np.asarray(y_true), np.asarray(y_pred)), 1)
    return matrix


def compute_metrics(y_true: Sequence[int], y_pred: Sequence[int], k: int) -> Metrics:
    y_true = np.asarray(y_true, dtype=np.int64)
    y_pred = np.asarray(y_pred, dtype=np.int64)
    if y_true.size == 0:
        raise InputError("Cannot score an empty test set.")
    if y_true.shape != y_pred.shape:
        raise InputError("Truth and predictions differ in length.")
    if k < 2 or min(y_true.min(), y_pred.min()) < 0 or max(y_true.max(), y_pred.max()) >= k:
        raise InputError(f"Labels must lie in 0..{k - 1} with k >= 2.")

    matrix = confusion_matrix(y_true, y_pred, k)
    total = matrix.sum()
    accuracy = float(np.trace(matrix)) / total

    per_class = []
    for c in range(k):
        tp = matrix[c, c]
        fp = matrix[:, c].sum() - tp
        fn = matrix[c, :].sum() - tp
        tn = total - tp - fp - fn
        precision = _ratio(tp, tp + fp)
        recall = _ratio(tp, tp + fn)
        per_class.append((precision, recall, _ratio(tn, tn + fp), _harmonic(precision, recall)))

    if k == 2:
        precision, recall, specificity, f_measure = per_class[1]
    else:
        precision, recall, specificity, f_measure = np.mean(per_class, axis=0).tolist()
    return Metrics(
        accuracy=accuracy,
        precision=float(precision),
        recall=float(recall),
        specificity=float(specificity),
        f_measure=float(f_measure),
        confusion=matrix.tolist(),
    )
