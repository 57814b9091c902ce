# decompose.py: Relative-total-variation structure/texture decomposition.
# The structure layer S minimizes
#     sum (S - I)^2 + lambda * sum_axes sum_p D(p) / (L(p) + eps)
# where D is the Gaussian-windowed total variation and L the windowed
# inherent variation. Each outer iteration freezes the weights, solves one
# sparse SPD system, and backtracks if the true objective went up.

from dataclasses import dataclass
from typing import List, Tuple

import numpy as np
import scipy.sparse as sp
from pydantic import BaseModel, ConfigDict, Field
from scipy.ndimage import gaussian_filter

from config import (
    RTV_CG_TOL,
    RTV_EPS,
    RTV_ITERATIONS,
    RTV_LAMBDA,
    RTV_MAX_STEP_HALVINGS,
    RTV_MIN_SIDE,
    RTV_SHARPNESS,
    RTV_SIGMA_S,
)
from errors import InputError
from field_io.field import GrayField
from logger import logger
from rtv.linear_solver import solve_spd


class RtvConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid", populate_by_name=True)

    lambda_: float = Field(RTV_LAMBDA, alias="lambda", gt=0, description="Structure/texture tradeoff.")
    sigma_s: float = Field(RTV_SIGMA_S, ge=1.0, description="Gaussian window scale in pixels.")
    eps: float = Field(RTV_EPS, gt=0, description="Guard added to the inherent variation.")
    sharpness: float = Field(RTV_SHARPNESS, gt=0, description="Floor on |grad S| in the reweighting.")
    iterations: int = Field(RTV_ITERATIONS, ge=1, description="Outer reweighting iterations.")
    cg_tol: float = Field(RTV_CG_TOL, gt=0, description="Relative residual required of each solve.")


@dataclass(frozen=True)
class RtvResult:
    structure: GrayField
    texture: GrayField
    objective_history: List[float]
    cg_iterations: List[int]
    residuals: List[float]


def _forward_differences(data: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Forward differences with replicate boundary (zero at the last column/row)."""
    dx = np.zeros_like(data)
    dy = np.zeros_like(data)
    dx[:, :-1] = data[:, 1:] - data[:, :-1]
    dy[:-1, :] = data[1:, :] - data[:-1, :]
    return dx, dy


def _difference_operators(height: int, width: int):
    def _one_axis(size: int) -> sp.csr_matrix:
        operator = sp.diags([-np.ones(size), np.ones(size - 1)], [0, 1], format="lil")
        operator[size - 1, size - 1] = 0.0
        return operator.tocsr()

    dx = sp.kron(sp.identity(height), _one_axis(width), format="csr")
    dy = sp.kron(_one_axis(height), sp.identity(width), format="csr")
    return dx, dy


def _regularizer(data: np.ndarray, config: RtvConfig) -> float:
    total = 0.0
    for gradient in _forward_differences(data):
        windowed_total = gaussian_filter(np.abs(gradient), config.sigma_s, mode="nearest")
        windowed_inherent = np.abs(gaussian_filter(gradient, config.sigma_s, mode="nearest"))
        total += float(np.sum(windowed_total / (windowed_inherent + config.eps)))
    return total


def _objective(image: np.ndarray, structure: np.ndarray, config: RtvConfig) -> float:
    return float(np.sum((structure - image) ** 2)) + config.lambda_ * _regularizer(structure, config)


def rtv_objective(field: GrayField, structure: GrayField, config: RtvConfig = RtvConfig()) -> float:
    if field.shape != structure.shape:
        raise InputError(f"Shape mismatch: field {field.shape} vs structure {structure.shape}.")
    return _objective(field.data, structure.data, config)


def _weights(structure: np.ndarray, config: RtvConfig) -> List[np.ndarray]:
    """Per-axis quadratic weights u * w of the frozen surrogate."""
    weights = []
    for gradient in _forward_differences(structure):
        inherent = np.abs(gaussian_filter(gradient, config.sigma_s, mode="nearest"))
        windowed = gaussian_filter(1.0 / (inherent + config.eps), config.sigma_s, mode="nearest")
        weights.append(windowed / np.maximum(np.abs(gradient), config.sharpness))
    return weights


def rtv_decompose_detailed(field: GrayField, config: RtvConfig = RtvConfig()) -> RtvResult:
    if min(field.width, field.height) < RTV_MIN_SIDE:
        raise InputError(f"RTV needs at least an {RTV_MIN_SIDE}x{RTV_MIN_SIDE} field.")

    image = field.data
    height, width = image.shape
    rhs = image.ravel()
    dx, dy = _difference_operators(height, width)

    structure = image.copy()
    history = [_objective(image, structure, config)]
    cg_iterations, residuals = [], []

    for iteration in range(config.iterations):
        weight_x, weight_y = _weights(structure, config)
        system = (
            sp.identity(height * width, format="csr")
            + (config.lambda_ / 2.0)
            * (dx.T @ sp.diags(weight_x.ravel()) @ dx + dy.T @ sp.diags(weight_y.ravel()) @ dy)
        ).tocsr()
        solution, info = solve_spd(system, rhs, structure.ravel(), config.cg_tol)
        cg_iterations.append(info.iterations)
        residuals.append(info.relative_residual)

        candidate = solution.reshape(height, width)
        step = candidate - structure
        value = _objective(image, candidate, config)
        halvings = 0
        while value > history[-1] and halvings < RTV_MAX_STEP_HALVINGS:
            halvings += 1
            candidate = structure + step * 0.5**halvings
            value = _objective(image, candidate, config)
        if value > history[-1]:
            candidate, value = structure, history[-1]
        if halvings:
            logger.debug("RTV", "Step shortened.", {"iteration": iteration, "halvings": halvings})

        structure = candidate
        history.append(value)

    structure_field = GrayField(structure)
    texture_field = GrayField(image - structure)
    logger.info(
        "RTV",
        "Decomposition finished.",
        {
            "size": [width, height],
            "objective": history,
            "cg_iterations": cg_iterations,
            "residuals": residuals,
        },
    )
    return RtvResult(structure_field, texture_field, history, cg_iterations, residuals)


def rtv_decompose(field: GrayField, config: RtvConfig = RtvConfig()) -> Tuple[GrayField, GrayField]:
    result = rtv_decompose_detailed(field, config)
    return result.structure, result.texture
