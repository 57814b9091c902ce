# serialization.py: JSON persistence of trained two-view models.
# Matrices are stored row-major with explicit shapes; binary SVMs appear in
# lexicographic (i < j) pair order. The schema is validated on load.

import json
from typing import List, Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from classify.fusion_net import FusionNet
from classify.split import SplitPlan
from classify.svm import BinarySvm, FeatureScaler, SvmModel
from classify.two_view import TwoViewModel
from errors import InputError
from logger import logger
from utils.reporting import dumps_json
from utils.atomic import write_text_atomic

FORMAT_TAG = "nst-two-view-1"


class _Doc(BaseModel):
    model_config = ConfigDict(extra="forbid")


class MatrixDoc(_Doc):
    shape: List[int] = Field(description="(rows, cols)")
    data: List[float] = Field(description="Row-major values.")

    @classmethod
    def of(cls, array: np.ndarray) -> "MatrixDoc":
        return cls(shape=list(array.shape), data=array.ravel().tolist())

    def array(self) -> np.ndarray:
        if len(self.shape) != 2 or self.shape[0] * self.shape[1] != len(self.data):
            raise InputError(f"Matrix shape {self.shape} does not match {len(self.data)} values.")
        return np.asarray(self.data, dtype=np.float64).reshape(self.shape)


class ScalerDoc(_Doc):
    mean: List[float]
    scale: List[float]


class BinaryDoc(_Doc):
    positive: int
    negative: int
    support_vectors: MatrixDoc
    dual_coef: List[float]
    bias: float
    w_norm: float
    dual_objective: float
    iterations: int


class SvmDoc(_Doc):
    class_count: int
    kernel: Literal["rbf", "linear"]
    rbf_gamma: float
    c: float
    tol: float
    view: str
    feature_dim: int
    scaler: ScalerDoc
    pairs: List[BinaryDoc]


class LayerDoc(_Doc):
    weights: MatrixDoc
    bias: List[float]


class SplitDoc(_Doc):
    svm_train: List[int]
    nn_train: List[int]
    test: List[int]
    seed: int


class ModelDoc(_Doc):
    format: Literal["nst-two-view-1"] = FORMAT_TAG
    pair_order: Literal["lexicographic"] = "lexicographic"
    class_count: int
    geometric: bool
    svm_t: SvmDoc
    svm_s: SvmDoc
    fusion_scaler: ScalerDoc
    fusion_layers: List[LayerDoc]
    split: SplitDoc


def _scaler_doc(scaler: FeatureScaler) -> ScalerDoc:
    return ScalerDoc(mean=scaler.mean.tolist(), scale=scaler.scale.tolist())


def _scaler(doc: ScalerDoc) -> FeatureScaler:
    return FeatureScaler(np.asarray(doc.mean), np.asarray(doc.scale))


def _svm_doc(model: SvmModel) -> SvmDoc:
    return SvmDoc(
        class_count=model.class_count,
        kernel=model.kernel,
        rbf_gamma=model.rbf_gamma,
        c=model.c,
        tol=model.tol,
        view=model.view,
        feature_dim=model.feature_dim,
        scaler=_scaler_doc(model.scaler),
        pairs=[
            BinaryDoc(
                positive=b.positive,
                negative=b.negative,
                support_vectors=MatrixDoc.of(b.support_vectors),
                dual_coef=b.dual_coef.tolist(),
                bias=b.bias,
                w_norm=b.w_norm,
                dual_objective=b.dual_objective,
                iterations=b.iterations,
            )
            for b in model.binaries
        ],
    )


def _svm(doc: SvmDoc) -> SvmModel:
    k = doc.class_count
    expected = [(i, j) for i in range(k) for j in range(i + 1, k)]
    if [(p.positive, p.negative) for p in doc.pairs] != expected:
        raise InputError(f"SVM '{doc.view}' pairs are not the {len(expected)} lexicographic pairs.")
    binaries = []
    for p in doc.pairs:
        vectors = p.support_vectors.array()
        if vectors.shape != (len(p.dual_coef), doc.feature_dim):
            raise InputError(f"Pair {p.positive}-{p.negative}: support vector shape {vectors.shape} is inconsistent.")
        binaries.append(
            BinarySvm(
                p.positive, p.negative, vectors, np.asarray(p.dual_coef), p.bias,
                p.w_norm, p.dual_objective, p.iterations,
            )
        )
    return SvmModel(
        class_count=k,
        kernel=doc.kernel,
        rbf_gamma=doc.rbf_gamma,
        c=doc.c,
        tol=doc.tol,
        scaler=_scaler(doc.scaler),
        binaries=binaries,
        view=doc.view,
        feature_dim=doc.feature_dim,
    )


def model_to_doc(model: TwoViewModel) -> ModelDoc:
    return ModelDoc(
        class_count=model.class_count,
        geometric=model.geometric,
        svm_t=_svm_doc(model.svm_t),
        svm_s=_svm_doc(model.svm_s),
        fusion_scaler=_scaler_doc(model.fusion_scaler),
        fusion_layers=[
            LayerDoc(weights=MatrixDoc.of(w), bias=b.tolist())
            for w, b in zip(model.net.weights, model.net.biases)
        ],
        split=SplitDoc(
            svm_train=model.plan.svm_train,
            nn_train=model.plan.nn_train,
            test=model.plan.test,
            seed=model.plan.seed,
        ),
    )


def model_from_doc(doc: ModelDoc) -> TwoViewModel:
    net = FusionNet(
        [layer.weights.array() for layer in doc.fusion_layers],
        [np.asarray(layer.bias, dtype=np.float64) for layer in doc.fusion_layers],
    )
    if net.class_count != doc.class_count:
        raise InputError("Fusion net output width does not match class_count.")
    return TwoViewModel(
        svm_t=_svm(doc.svm_t),
        svm_s=_svm(doc.svm_s),
        fusion_scaler=_scaler(doc.fusion_scaler),
        net=net,
        plan=SplitPlan(doc.split.svm_train, doc.split.nn_train, doc.split.test, doc.split.seed),
        class_count=doc.class_count,
        geometric=doc.geometric,
    )


def save_model(model: TwoViewModel, path: str):
    write_text_atomic(path, dumps_json(model_to_doc(model).model_dump()))
    logger.info("Protocol", "Model saved.", {"path": path})


def load_model(path: str) -> TwoViewModel:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            payload = json.load(handle)
    except FileNotFoundError as e:
        raise InputError(f"Model file not found: {path}") from e
    except json.JSONDecodeError as e:
        raise InputError(f"Model file {path} is not valid JSON: {e}") from e
    try:
        doc = ModelDoc.model_validate(payload)
    except ValidationError as e:
        raise InputError(f"Model file {path} does not match the schema: {e.error_count()} errors.") from e
    return model_from_doc(doc)
