# fusion_net.py: The shallow fusion network over SVM decision distances.
# Three fully connected layers (k(k-1) -> 8 -> 4 -> k), ReLU on the two
# hidden layers, softmax output, trained by full-batch gradient descent on
# mean cross-entropy.

import copy
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from scipy.special import log_softmax, softmax

from config import FUSION_BIAS_INIT, FUSION_EPOCHS, FUSION_HIDDEN, FUSION_LR, FUSION_RESTARTS
from errors import InputError, NumericalError
from logger import logger
from utils.seeding import stage_rng


class FusionConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    hidden: Tuple[int, int] = Field(FUSION_HIDDEN, description="Widths of the two hidden layers.")
    epochs: int = Field(FUSION_EPOCHS, ge=0, description="Full-batch gradient steps.")
    lr: float = Field(FUSION_LR, gt=0.0, description="Gradient descent step size.")
    bias_init: float = Field(FUSION_BIAS_INIT, description="Initial value of every bias.")
    restarts: int = Field(FUSION_RESTARTS, ge=1, description="Initializations tried; the lowest training loss is kept.")


@dataclass
class TrainingHistory:
    train_loss: List[float] = field(default_factory=list)
    train_accuracy: List[float] = field(default_factory=list)
    monitor_loss: List[float] = field(default_factory=list)
    monitor_accuracy: List[float] = field(default_factory=list)

    def rows(self) -> List[Tuple]:
        """(epoch, train_loss, train_accuracy, monitor_loss, monitor_accuracy) per epoch."""
        out = []
        for epoch, (loss, acc) in enumerate(zip(self.train_loss, self.train_accuracy)):
            monitor = (
                (self.monitor_loss[epoch], self.monitor_accuracy[epoch])
                if epoch < len(self.monitor_loss)
                else ("", "")
            )
            out.append((epoch, loss, acc, *monitor))
        return out


@dataclass(eq=False)
class FusionNet:
    """Row-vector convention: h = relu(x @ W + b)."""

    weights: List[np.ndarray]
    biases: List[np.ndarray]
    history: TrainingHistory = field(default_factory=TrainingHistory)

    def __post_init__(self):
        if len(self.weights) != 3 or len(self.biases) != 3:
            raise InputError("A fusion net has exactly three layers.")
        for index, (w, b) in enumerate(zip(self.weights, self.biases)):
            if w.ndim != 2 or b.shape != (w.shape[1],):
                raise InputError(f"Layer {index + 1} has inconsistent shapes {w.shape}, {b.shape}.")
            if index and w.shape[0] != self.weights[index - 1].shape[1]:
                raise InputError(f"Layer {index + 1} does not chain onto layer {index}.")
        k = self.class_count
        if self.input_dim != k * (k - 1):
            raise InputError(f"Input width {self.input_dim} is not k(k-1) for k={k}.")

    @property
    def class_count(self) -> int:
        return self.weights[2].shape[1]

    @property
    def input_dim(self) -> int:
        return self.weights[0].shape[0]

    def parameters(self) -> List[np.ndarray]:
        return [p for pair in zip(self.weights, self.biases) for p in pair]

    def copy(self) -> "FusionNet":
        return FusionNet(
            [w.copy() for w in self.weights],
            [b.copy() for b in self.biases],
            copy.deepcopy(self.history),
        )


def init_fusion_net(class_count: int, seed: int, config: FusionConfig = FusionConfig()) -> FusionNet:
    """He-scaled Gaussian weights drawn from the fusion-init stage of `seed`."""
    if class_count < 2:
        raise InputError("The fusion net needs k >= 2.")
    rng = stage_rng(seed, "fusion_init")
    widths = [class_count * (class_count - 1), *config.hidden, class_count]
    weights, biases = [], []
    for fan_in, fan_out in zip(widths[:-1], widths[1:]):
        weights.append(rng.standard_normal((fan_in, fan_out)) * np.sqrt(2.0 / fan_in))
        biases.append(np.full(fan_out, config.bias_init))
    return FusionNet(weights, biases)


def _check_inputs(net: FusionNet, inputs) -> np.ndarray:
    x = np.asarray(inputs, dtype=np.float64)
    if x.ndim != 2 or x.shape[1] != net.input_dim:
        raise InputError(f"Fusion input must have {net.input_dim} columns, got shape {x.shape}.")
    if not np.all(np.isfinite(x)):
        raise InputError("Fusion input contains non-finite values.")
    return x


def _forward(net: FusionNet, x: np.ndarray):
    w1, w2, w3 = net.weights
    b1, b2, b3 = net.biases
    z1 = x @ w1 + b1
    a1 = np.maximum(z1, 0.0)
    z2 = a1 @ w2 + b2
    a2 = np.maximum(z2, 0.0)
    logits = a2 @ w3 + b3
    return (z1, a1, z2, a2), logits


def fusion_logits(net: FusionNet, inputs) -> np.ndarray:
    return _forward(net, _check_inputs(net, inputs))[1]


def fusion_forward(net: FusionNet, d) -> np.ndarray:
    """Class probabilities for one distance vector (1D) or a batch (2D)."""
    values = np.asarray(d, dtype=np.float64)
    single = values.ndim == 1
    logits = fusion_logits(net, values[None, :] if single else values)
    if not np.all(np.isfinite(logits)):
        raise NumericalError("Non-finite activations in the fusion net.")
    probabilities = softmax(logits, axis=1)
    return probabilities[0] if single else probabilities


def fusion_loss(net: FusionNet, inputs, labels) -> float:
    x = _check_inputs(net, inputs)
    y = _check_labels(net, labels, x.shape[0])
    log_p = log_softmax(_forward(net, x)[1], axis=1)
    return float(-np.mean(log_p[np.arange(y.size), y]))


def _check_labels(net: FusionNet, labels, n: int) -> np.ndarray:
    y = np.asarray(labels, dtype=np.int64)
    if y.shape != (n,):
        raise InputError("Labels and inputs differ in length.")
    if n == 0:
        raise InputError("Empty training set.")
    if y.min() < 0 or y.max() >= net.class_count:
        raise InputError(f"Labels must lie in 0..{net.class_count - 1}.")
    return y


def fusion_gradients(net: FusionNet, inputs, labels) -> Tuple[float, List[np.ndarray]]:
    """Mean cross-entropy and its gradient, ordered like `net.parameters()`."""
    x = _check_inputs(net, inputs)
    y = _check_labels(net, labels, x.shape[0])
    n = y.size
    (z1, a1, z2, a2), logits = _forward(net, x)
    log_p = log_softmax(logits, axis=1)
    loss = float(-np.mean(log_p[np.arange(n), y]))

    d_logits = np.exp(log_p)
    d_logits[np.arange(n), y] -= 1.0
    d_logits /= n
    w1, w2, w3 = net.weights

    d_w3 = a2.T @ d_logits
    d_b3 = d_logits.sum(axis=0)
    d_z2 = (d_logits @ w3.T) * (z2 > 0.0)
    d_w2 = a1.T @ d_z2
    d_b2 = d_z2.sum(axis=0)
    d_z1 = (d_z2 @ w2.T) * (z1 > 0.0)
    d_w1 = x.T @ d_z1
    d_b1 = d_z1.sum(axis=0)
    return loss, [d_w1, d_b1, d_w2, d_b2, d_w3, d_b3]


def _accuracy(net: FusionNet, x: np.ndarray, y: np.ndarray) -> float:
    return float(np.mean(np.argmax(_forward(net, x)[1], axis=1) == y))


def fusion_train(
    net: FusionNet,
    inputs,
    labels: Sequence[int],
    epochs: int = FUSION_EPOCHS,
    lr: float = FUSION_LR,
    seed: Optional[int] = None,
    monitor: Optional[Tuple[np.ndarray, Sequence[int]]] = None,
    config: FusionConfig = FusionConfig(),
) -> FusionNet:
    """
    Returns a trained copy of `net`; when `seed` is given the copy is first
    re-initialized from it. Per-epoch loss and accuracy (before the update)
    are recorded for the training set and the optional monitor set.
    """
    if epochs < 0 or lr <= 0.0:
        raise InputError("epochs must be >= 0 and lr > 0.")
    if seed is not None:
        widths = (net.weights[0].shape[1], net.weights[1].shape[1])
        net = init_fusion_net(net.class_count, seed, config.model_copy(update={"hidden": widths}))
    trained = net.copy()
    trained.history = TrainingHistory()
    x = _check_inputs(trained, inputs)
    y = _check_labels(trained, labels, x.shape[0])
    if monitor is not None:
        monitor_x = _check_inputs(trained, monitor[0])
        monitor_y = _check_labels(trained, monitor[1], monitor_x.shape[0])

    history = trained.history
    for epoch in range(epochs):
        loss, grads = fusion_gradients(trained, x, y)
        if not np.isfinite(loss) or not all(np.all(np.isfinite(g)) for g in grads):
            logger.error("FusionNet", "Training diverged.", {"epoch": epoch, "loss": loss, "lr": lr})
            raise NumericalError(f"Fusion training diverged at epoch {epoch} (loss {loss}); lower the learning rate.")
        history.train_loss.append(loss)
        history.train_accuracy.append(_accuracy(trained, x, y))
        if monitor is not None:
            history.monitor_loss.append(fusion_loss(trained, monitor_x, monitor_y))
            history.monitor_accuracy.append(_accuracy(trained, monitor_x, monitor_y))

        for param, grad in zip(trained.parameters(), grads):
            param -= lr * grad

    if epochs:
        logger.info(
            "FusionNet",
            "Training finished.",
            {
                "epochs": epochs,
                "lr": lr,
                "first_loss": history.train_loss[0],
                "last_loss": history.train_loss[-1],
                "last_accuracy": history.train_accuracy[-1],
            },
        )
    return trained


def fusion_train_restarts(
    class_count: int,
    inputs,
    labels: Sequence[int],
    seed: int,
    config: FusionConfig = FusionConfig(),
    monitor: Optional[Tuple[np.ndarray, Sequence[int]]] = None,
) -> FusionNet:
    """
    Trains `config.restarts` nets initialized from seeds seed, seed+1, ...
    and keeps the one with the lowest training loss after the last update,
    the earliest on ties.
    """
    best, best_loss, losses = None, np.inf, []
    for restart in range(config.restarts):
        net = fusion_train(
            init_fusion_net(class_count, seed + restart, config),
            inputs,
            labels,
            epochs=config.epochs,
            lr=config.lr,
            monitor=monitor,
        )
        loss = fusion_loss(net, inputs, labels)
        losses.append(loss)
        if loss < best_loss:
            best, best_loss = net, loss
    logger.debug("FusionNet", "Restarts compared.", {"losses": losses, "kept": losses.index(best_loss)})
    return best


def gradient_check(net: FusionNet, inputs, labels, step: float = 1e-5) -> float:
    """Maximal |a - n| / max(|a| + |n|, 1e-5) over all parameters, n by central differences."""
    _, analytic = fusion_gradients(net, inputs, labels)
    probe = net.copy()
    worst = 0.0
    for param, grad in zip(probe.parameters(), analytic):
        flat = param.reshape(-1)
        flat_grad = grad.reshape(-1)
        for index in range(flat.size):
            original = flat[index]
            flat[index] = original + step
            plus = fusion_loss(probe, inputs, labels)
            flat[index] = original - step
            minus = fusion_loss(probe, inputs, labels)
            flat[index] = original
            numeric = (plus - minus) / (2.0 * step)
            error = abs(flat_grad[index] - numeric) / max(abs(flat_grad[index]) + abs(numeric), 1e-5)
            worst = max(worst, error)
    return worst


def _last(values: List[float]) -> Optional[float]:
    return values[-1] if values else None


def history_summary(history: TrainingHistory) -> Dict[str, Optional[float]]:
    return {
        "train_loss": _last(history.train_loss),
        "train_accuracy": _last(history.train_accuracy),
        "monitor_loss": _last(history.monitor_loss),
        "monitor_accuracy": _last(history.monitor_accuracy),
    }
