# svm.py: One-vs-one soft-margin SVMs trained by SMO.
# Every class pair (i < j) gets a binary machine with class i as +1 and
# class j as -1. Each binary dual is solved over a precomputed kernel matrix
# with maximal-violating-pair working-set selection; features are z-scored
# with training statistics stored in the model.

from dataclasses import dataclass, field
from itertools import combinations
from typing import List, Literal, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from scipy.spatial.distance import cdist

from config import SVM_C, SVM_MAX_PASSES, SVM_TAU, SVM_TOL
from errors import InputError, NumericalError
from logger import logger


class SvmConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    c: float = Field(SVM_C, gt=0.0, description="Box constraint.")
    kernel: Literal["rbf", "linear"] = Field("rbf", description="Kernel function.")
    rbf_gamma: Optional[float] = Field(
        None, gt=0.0, description="RBF width; None uses 1 / (dim * variance) of the scaled features."
    )
    tol: float = Field(SVM_TOL, gt=0.0, description="Stopping tolerance on the maximal KKT violation.")
    max_iter: int = Field(SVM_MAX_PASSES, ge=1, description="Cap on SMO pair updates per binary problem.")


@dataclass(frozen=True, eq=False)
class FeatureScaler:
    """Z-score transform; constant columns keep unit scale."""

    mean: np.ndarray
    scale: np.ndarray

    @classmethod
    def fit(cls, features: np.ndarray) -> "FeatureScaler":
        features = np.asarray(features, dtype=np.float64)
        std = features.std(axis=0)
        return cls(features.mean(axis=0), np.where(std > 0.0, std, 1.0))

    def transform(self, features: np.ndarray) -> np.ndarray:
        return (np.asarray(features, dtype=np.float64) - self.mean) / self.scale


@dataclass(frozen=True, eq=False)
class BinarySvm:
    positive: int
    negative: int
    support_vectors: np.ndarray
    dual_coef: np.ndarray
    bias: float
    w_norm: float = 0.0
    dual_objective: float = 0.0
    iterations: int = 0


@dataclass(frozen=True, eq=False)
class SvmModel:
    class_count: int
    kernel: str
    rbf_gamma: float
    c: float
    tol: float
    scaler: FeatureScaler
    binaries: List[BinarySvm]
    view: str = ""
    feature_dim: int = field(default=0)

    @property
    def pairs(self) -> List[Tuple[int, int]]:
        return [(b.positive, b.negative) for b in self.binaries]


def kernel_matrix(a: np.ndarray, b: np.ndarray, kernel: str, gamma: float) -> np.ndarray:
    if kernel == "linear":
        return a @ b.T
    if kernel == "rbf":
        return np.exp(-gamma * cdist(a, b, "sqeuclidean"))
    raise InputError(f"Unknown kernel '{kernel}'.")


def smo_solve(kernel: np.ndarray, y: np.ndarray, c: float, tol: float, max_iter: int = SVM_MAX_PASSES):
    """
    Minimizes 0.5 a'Qa - e'a with Q = yy' * K subject to y'a = 0 and
    0 <= a <= c. Returns (alpha, rho, gradient, iterations); the decision
    function is sum(a y K) - rho.
    """
    n = y.size
    alpha = np.zeros(n)
    gradient = -np.ones(n)
    diag = np.diag(kernel)
    iterations = 0

    while iterations < max_iter:
        up = ((y > 0) & (alpha < c)) | ((y < 0) & (alpha > 0))
        low = ((y > 0) & (alpha > 0)) | ((y < 0) & (alpha < c))
        score = -y * gradient
        if not up.any() or not low.any():
            break
        i = int(np.flatnonzero(up)[np.argmax(score[up])])
        j = int(np.flatnonzero(low)[np.argmin(score[low])])
        if score[i] - score[j] < tol:
            break
        iterations += 1

        quad = diag[i] + diag[j] - 2.0 * kernel[i, j]
        if quad <= 0.0:
            quad = SVM_TAU
        old_i, old_j = alpha[i], alpha[j]

        if y[i] != y[j]:
            delta = (-gradient[i] - gradient[j]) / quad
            diff = old_i - old_j
            alpha[i] += delta
            alpha[j] += delta
            if diff > 0:
                if alpha[j] < 0:
                    alpha[j], alpha[i] = 0.0, diff
            elif alpha[i] < 0:
                alpha[i], alpha[j] = 0.0, -diff
            if diff > 0:
                if alpha[i] > c:
                    alpha[i], alpha[j] = c, c - diff
            elif alpha[j] > c:
                alpha[j], alpha[i] = c, c + diff
        else:
            delta = (gradient[i] - gradient[j]) / quad
            total = old_i + old_j
            alpha[i] -= delta
            alpha[j] += delta
            if total > c:
                if alpha[i] > c:
                    alpha[i], alpha[j] = c, total - c
            elif alpha[j] < 0:
                alpha[j], alpha[i] = 0.0, total
            if total > c:
                if alpha[j] > c:
                    alpha[j], alpha[i] = c, total - c
            elif alpha[i] < 0:
                alpha[i], alpha[j] = 0.0, total

        d_i, d_j = alpha[i] - old_i, alpha[j] - old_j
        gradient += y * (y[i] * kernel[:, i] * d_i + y[j] * kernel[:, j] * d_j)
    else:
        logger.warning("SMO", "Iteration cap reached before the KKT tolerance.", {"max_iter": max_iter})

    y_grad = y * gradient
    at_upper = alpha >= c
    at_lower = alpha <= 0
    free = ~(at_upper | at_lower)
    if free.any():
        rho = float(np.mean(y_grad[free]))
    else:
        ub_mask = (at_upper & (y < 0)) | (at_lower & (y > 0))
        lb_mask = (at_upper & (y > 0)) | (at_lower & (y < 0))
        ub = float(np.min(y_grad[ub_mask])) if ub_mask.any() else np.inf
        lb = float(np.max(y_grad[lb_mask])) if lb_mask.any() else -np.inf
        rho = (ub + lb) / 2.0
    if not np.all(np.isfinite(alpha)) or not np.isfinite(rho):
        raise NumericalError("SMO produced non-finite multipliers.")
    return alpha, rho, gradient, iterations


def _as_matrix(features) -> np.ndarray:
    matrix = np.asarray(features, dtype=np.float64)
    if matrix.ndim == 1:
        matrix = matrix[:, None]
    if matrix.ndim != 2 or matrix.shape[0] == 0:
        raise InputError("Features must be a non-empty (n, d) array.")
    if not np.all(np.isfinite(matrix)):
        raise InputError("Features contain non-finite values.")
    return matrix


def svm_train(
    features,
    labels: Sequence[int],
    config: SvmConfig = SvmConfig(),
    class_count: Optional[int] = None,
    view: str = "",
) -> SvmModel:
    x = _as_matrix(features)
    y_all = np.asarray(labels, dtype=np.int64)
    if y_all.shape != (x.shape[0],):
        raise InputError("Features and labels differ in length.")
    k = int(y_all.max()) + 1 if class_count is None else class_count
    present = set(np.unique(y_all).tolist())
    if len(present) < 2:
        raise InputError("SVM training needs at least two classes.")
    missing = sorted(set(range(k)) - present)
    if missing or y_all.min() < 0 or y_all.max() >= k:
        raise InputError(f"Every class 0..{k - 1} needs training examples; missing {missing}.")

    scaler = FeatureScaler.fit(x)
    xs = scaler.transform(x)
    if config.rbf_gamma is not None:
        gamma = config.rbf_gamma
    else:
        variance = float(xs.var())
        gamma = 1.0 / (xs.shape[1] * (variance if variance > 0.0 else 1.0))
    full_kernel = kernel_matrix(xs, xs, config.kernel, gamma)

    binaries = []
    for positive, negative in combinations(range(k), 2):
        index = np.flatnonzero((y_all == positive) | (y_all == negative))
        y = np.where(y_all[index] == positive, 1.0, -1.0)
        sub_kernel = full_kernel[np.ix_(index, index)]
        alpha, rho, gradient, iterations = smo_solve(sub_kernel, y, config.c, config.tol, config.max_iter)

        support = alpha > 0.0
        dual_coef = alpha[support] * y[support]
        w_sq = float(dual_coef @ sub_kernel[np.ix_(support, support)] @ dual_coef)
        objective = -(0.5 * float(alpha @ gradient) - 0.5 * float(alpha.sum()))
        binaries.append(
            BinarySvm(
                positive=positive,
                negative=negative,
                support_vectors=xs[index[support]],
                dual_coef=dual_coef,
                bias=-rho,
                w_norm=float(np.sqrt(max(w_sq, 0.0))),
                dual_objective=objective,
                iterations=iterations,
            )
        )

    logger.info(
        "SMO",
        "One-vs-one SVM trained.",
        {
            "view": view,
            "classes": k,
            "examples": x.shape[0],
            "kernel": config.kernel,
            "gamma": gamma,
            "support_vectors": [int(b.dual_coef.size) for b in binaries],
            "iterations": [b.iterations for b in binaries],
        },
    )
    return SvmModel(
        class_count=k,
        kernel=config.kernel,
        rbf_gamma=gamma,
        c=config.c,
        tol=config.tol,
        scaler=scaler,
        binaries=binaries,
        view=view,
        feature_dim=x.shape[1],
    )


def _decision_matrix(model: SvmModel, x: np.ndarray, geometric: bool) -> np.ndarray:
    if x.shape[1] != model.feature_dim:
        raise InputError(f"Expected {model.feature_dim} features, got {x.shape[1]}.")
    xs = model.scaler.transform(x)
    columns = []
    for binary in model.binaries:
        values = kernel_matrix(xs, binary.support_vectors, model.kernel, model.rbf_gamma) @ binary.dual_coef
        values = values + binary.bias
        if geometric:
            if binary.w_norm <= 0.0:
                raise NumericalError(f"Pair {binary.positive}-{binary.negative} has a zero normal vector.")
            values = values / binary.w_norm
        columns.append(values)
    return np.column_stack(columns)


def svm_decision_distances(model: SvmModel, x, geometric: bool = False) -> np.ndarray:
    """
    Signed decision values f(x) = sum(alpha y K) + b per pair, in
    lexicographic pair order. A single vector gives a 1D result, a matrix
    one row per example.
    """
    values = np.asarray(x, dtype=np.float64)
    if values.ndim == 1:
        return _decision_matrix(model, values[None, :], geometric)[0]
    return _decision_matrix(model, _as_matrix(values), geometric)


def _vote(model: SvmModel, decisions: np.ndarray) -> int:
    votes = np.zeros(model.class_count, dtype=np.int64)
    strength = np.zeros(model.class_count)
    for (positive, negative), value in zip(model.pairs, decisions):
        winner = positive if value > 0 else negative
        votes[winner] += 1
        strength[winner] += abs(value)
    tied = np.flatnonzero(votes == votes.max())
    best = tied[strength[tied] == strength[tied].max()]
    return int(best[0])


def svm_predict(model: SvmModel, x):
    """Majority vote over pairs; ties go to the larger summed |f|, then the lower index."""
    values = np.asarray(x, dtype=np.float64)
    if values.ndim == 1:
        return _vote(model, svm_decision_distances(model, values))
    decisions = svm_decision_distances(model, values)
    return np.array([_vote(model, row) for row in decisions], dtype=np.int64)
