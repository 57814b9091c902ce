# two_view.py: Training and evaluation of the two-view classifier.
# A texture-view SVM ensemble and a structure-view SVM ensemble are trained
# on the SVM half of the split. Their decision distances on the held-out
# fusion set, concatenated and standardized, train the fusion network.

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from classify.fusion_net import FusionConfig, FusionNet, fusion_forward, fusion_train_restarts
from classify.metrics import Metrics, compute_metrics
from classify.split import SplitPlan, make_split
from classify.svm import FeatureScaler, SvmConfig, SvmModel, svm_decision_distances, svm_predict, svm_train
from errors import InputError
from features.dataset import TwoViewFeatures, feature_matrix
from logger import logger
from utils.seeding import derive_seed

VIEW_TAGS = {"texture": "T", "structure": "S", "both": "TconcatS"}


class TwoViewConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    svm: SvmConfig = Field(default_factory=SvmConfig)
    fusion: FusionConfig = Field(default_factory=FusionConfig)
    test_count: Optional[int] = Field(None, ge=1, description="Test-set size; None keeps the 40/240 share.")
    geometric: bool = Field(False, description="Feed geometric instead of functional margins.")


@dataclass(frozen=True, eq=False)
class TwoViewModel:
    svm_t: SvmModel
    svm_s: SvmModel
    fusion_scaler: FeatureScaler
    net: FusionNet
    plan: SplitPlan
    class_count: int
    geometric: bool = False


def _labels(rows: Sequence[TwoViewFeatures]) -> np.ndarray:
    return np.array([r.label for r in rows], dtype=np.int64)


def _check_two_views(rows: Sequence[TwoViewFeatures]):
    if not rows:
        raise InputError("No examples given.")
    if rows[0].phi_t.size == 0 or rows[0].phi_s.size == 0:
        raise InputError("Two-view training needs both phi_t and phi_s features.")


def _distances(svm_t: SvmModel, svm_s: SvmModel, rows: Sequence[TwoViewFeatures], geometric: bool) -> np.ndarray:
    d_t = svm_decision_distances(svm_t, feature_matrix(rows, "texture"), geometric)
    d_s = svm_decision_distances(svm_s, feature_matrix(rows, "structure"), geometric)
    return np.hstack([d_t, d_s])


def fused_distances(model: TwoViewModel, rows: Sequence[TwoViewFeatures]) -> np.ndarray:
    """Raw d_T (+) d_S rows, before standardization."""
    return _distances(model.svm_t, model.svm_s, rows, model.geometric)


def train_two_view(
    rows: Sequence[TwoViewFeatures],
    k: int,
    config: TwoViewConfig = TwoViewConfig(),
    seed: int = 0,
) -> TwoViewModel:
    _check_two_views(rows)
    labels = _labels(rows)
    plan = make_split(len(rows), config.test_count, seed, labels, k)
    svm_rows = [rows[i] for i in plan.svm_train]
    svm_labels = labels[plan.svm_train]

    svm_t = svm_train(feature_matrix(svm_rows, "texture"), svm_labels, config.svm, k, view="T")
    svm_s = svm_train(feature_matrix(svm_rows, "structure"), svm_labels, config.svm, k, view="S")

    nn_rows = [rows[i] for i in plan.nn_train]
    nn_inputs = _distances(svm_t, svm_s, nn_rows, config.geometric)
    scaler = FeatureScaler.fit(nn_inputs)
    test_rows = [rows[i] for i in plan.test]
    monitor = (scaler.transform(_distances(svm_t, svm_s, test_rows, config.geometric)), labels[plan.test])

    net = fusion_train_restarts(
        k,
        scaler.transform(nn_inputs),
        labels[plan.nn_train],
        derive_seed(seed, "fusion_init"),
        config.fusion,
        monitor=monitor,
    )
    logger.info(
        "Protocol",
        "Two-view model trained.",
        {
            "seed": seed,
            "sizes": [len(plan.svm_train), len(plan.nn_train), len(plan.test)],
            "final_loss": net.history.train_loss[-1] if net.history.train_loss else None,
        },
    )
    return TwoViewModel(svm_t, svm_s, scaler, net, plan, k, config.geometric)


def predict_two_view(model: TwoViewModel, rows: Sequence[TwoViewFeatures]) -> np.ndarray:
    _check_two_views(rows)
    inputs = model.fusion_scaler.transform(fused_distances(model, rows))
    return np.argmax(fusion_forward(model.net, inputs), axis=1)


def evaluate(model: TwoViewModel, rows: Sequence[TwoViewFeatures]) -> Metrics:
    if not rows:
        raise InputError("Cannot evaluate on an empty test set.")
    return compute_metrics(_labels(rows), predict_two_view(model, rows), model.class_count)


def train_view_svm(
    train_rows: Sequence[TwoViewFeatures],
    test_rows: Sequence[TwoViewFeatures],
    view: str,
    k: int,
    config: SvmConfig = SvmConfig(),
) -> Metrics:
    """Single-view baseline: texture, structure, or the concatenation ("both")."""
    model = svm_train(feature_matrix(train_rows, view), _labels(train_rows), config, k, view=VIEW_TAGS[view])
    predictions = svm_predict(model, feature_matrix(test_rows, view))
    return compute_metrics(_labels(test_rows), predictions, k)
