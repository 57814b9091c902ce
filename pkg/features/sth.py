# sth.py: Structure thresholding for dark-object area.
# The structure layer is histogram-equalized, quantized to a few levels,
# and its darkest levels are taken as a binary mask. Of the connected dark
# components, the one whose centroid lies nearest the ROI centre is the
# object; its pixel count is the feature.

from typing import Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from scipy import ndimage

from config import (
    STH_CONNECTIVITY,
    STH_DARK_THRESHOLD,
    STH_EQUALIZE_BINS,
    STH_MIN_SIDE,
    STH_QUANT_LEVELS,
)
from errors import InputError
from field_io.field import GrayField
from logger import logger


class SthConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    quant_levels: int = Field(STH_QUANT_LEVELS, ge=2, description="Quantization levels after equalization.")
    dark_threshold: int = Field(STH_DARK_THRESHOLD, ge=1, description="Levels below this are dark.")
    connectivity: int = Field(STH_CONNECTIVITY, description="Pixel connectivity, 4 or 8.")
    roi_center: Optional[Tuple[float, float]] = Field(
        None, description="(x, y) centre of interest; defaults to the field centre."
    )

    @field_validator("connectivity")
    @classmethod
    def _check_connectivity(cls, value: int) -> int:
        if value not in (4, 8):
            raise ValueError("connectivity must be 4 or 8")
        return value

    @model_validator(mode="after")
    def _check_threshold(self):
        if self.dark_threshold >= self.quant_levels:
            raise ValueError("dark_threshold must be below quant_levels")
        return self


def hist_equalize(field: GrayField, bins: int = STH_EQUALIZE_BINS) -> GrayField:
    """
    Maps each value to the empirical CDF of its bin; values are clipped to
    [0,1] first. Values sharing one of the `bins` bins get the same output,
    so invariance under injective intensity remaps only holds when the remap
    keeps distinct levels in distinct bins.
    """
    if bins < 2:
        raise InputError("Equalization needs at least two bins.")
    values = np.clip(field.data, 0.0, 1.0)
    index = np.minimum(np.floor(values * bins).astype(np.int64), bins - 1)
    cdf = np.cumsum(np.bincount(index.ravel(), minlength=bins)) / index.size
    return GrayField(cdf[index])


def quantize(field: GrayField, levels: int) -> np.ndarray:
    """Uniform bins over [0,1]: level = min(floor(v * levels), levels - 1)."""
    if levels < 2:
        raise InputError(f"Quantization needs at least 2 levels, got {levels}.")
    if field.data.min() < 0.0 or field.data.max() > 1.0:
        raise InputError("Quantization expects values in [0,1].")
    return np.minimum(np.floor(field.data * levels).astype(np.int64), levels - 1)


def dark_components(structure: GrayField, config: SthConfig = SthConfig()):
    """Labelled dark mask and the (x, y) centroid of each component."""
    levels = quantize(hist_equalize(structure), config.quant_levels)
    mask = levels < config.dark_threshold
    rank = 1 if config.connectivity == 4 else 2
    labels, count = ndimage.label(mask, structure=ndimage.generate_binary_structure(2, rank))
    if count == 0:
        return labels, np.empty((0, 2))
    centres = ndimage.center_of_mass(mask, labels, index=np.arange(1, count + 1))
    # center_of_mass gives (row, col)
    centroids = np.array([(col, row) for row, col in centres], dtype=np.float64)
    return labels, centroids


def sth_area(structure: GrayField, config: SthConfig = SthConfig()) -> float:
    if min(structure.width, structure.height) < STH_MIN_SIDE:
        raise InputError(f"STH needs at least a {STH_MIN_SIDE}x{STH_MIN_SIDE} field.")

    labels, centroids = dark_components(structure, config)
    if len(centroids) == 0:
        raise InputError("No dark object found: the thresholded mask is empty.")

    if config.roi_center is None:
        centre = np.array([(structure.width - 1) / 2.0, (structure.height - 1) / 2.0])
    else:
        centre = np.asarray(config.roi_center, dtype=np.float64)
    distances = np.hypot(*(centroids - centre).T)
    chosen = int(np.argmin(distances)) + 1
    area = float(np.count_nonzero(labels == chosen))

    logger.debug(
        "STH",
        "Object selected.",
        {"components": len(centroids), "label": chosen, "distance": float(distances[chosen - 1]), "area": area},
    )
    return area
