# classify: per-view SVMs, the fusion network, and the evaluation protocol.

from classify.fusion_net import (
    FusionConfig,
    FusionNet,
    TrainingHistory,
    fusion_forward,
    fusion_gradients,
    fusion_loss,
    fusion_train,
    fusion_train_restarts,
    gradient_check,
    init_fusion_net,
)
from classify.metrics import Metrics, compute_metrics, confusion_matrix
from classify.protocol import RepeatSummary, RepetitionResult, repeat_eval
from classify.serialization import load_model, save_model
from classify.split import SplitPlan, default_test_count, make_split
from classify.svm import (
    BinarySvm,
    FeatureScaler,
    SvmConfig,
    SvmModel,
    kernel_matrix,
    smo_solve,
    svm_decision_distances,
    svm_predict,
    svm_train,
)
from classify.synthetic import make_complementary_views
from classify.two_view import (
    TwoViewConfig,
    TwoViewModel,
    evaluate,
    fused_distances,
    predict_two_view,
    train_two_view,
    train_view_svm,
)

__all__ = [
    "BinarySvm",
    "FeatureScaler",
    "FusionConfig",
    "FusionNet",
    "Metrics",
    "RepeatSummary",
    "RepetitionResult",
    "SplitPlan",
    "SvmConfig",
    "SvmModel",
    "TrainingHistory",
    "TwoViewConfig",
    "TwoViewModel",
    "compute_metrics",
    "confusion_matrix",
    "default_test_count",
    "evaluate",
    "fused_distances",
    "fusion_forward",
    "fusion_gradients",
    "fusion_loss",
    "fusion_train",
    "fusion_train_restarts",
    "gradient_check",
    "init_fusion_net",
    "kernel_matrix",
    "load_model",
    "make_complementary_views",
    "make_split",
    "predict_two_view",
    "repeat_eval",
    "save_model",
    "smo_solve",
    "svm_decision_distances",
    "svm_predict",
    "svm_train",
    "train_two_view",
    "train_view_svm",
]
