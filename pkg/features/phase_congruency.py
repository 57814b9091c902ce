# phase_congruency.py: Phase congruency of the structure layer.
# A bank of log-Gabor quadrature filters (scales x orientations) is applied
# in the frequency domain. Per orientation, the local energy of the phase
# deviation from the amplitude-weighted mean phase is summed over scales,
# noise-thresholded, and weighted by a sigmoid of the frequency spread. The
# map is the orientation total divided by the total amplitude.

import math
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from config import (
    PC_CUT_OFF,
    PC_EPS,
    PC_G,
    PC_GAMMA,
    PC_MIN_SIDE,
    PC_MIN_WAVELENGTH,
    PC_MULT,
    PC_NOISE_K,
    PC_ORIENTATIONS,
    PC_SCALES,
    PC_SIGMA_ON_F,
)
from errors import InputError
from field_io.field import GrayField
from logger import logger

# Butterworth lowpass applied to every radial filter.
_LOWPASS_CUTOFF = 0.45
_LOWPASS_ORDER = 15


class PcConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    scales: int = Field(PC_SCALES, ge=2, description="Number of log-Gabor scales.")
    orientations: int = Field(PC_ORIENTATIONS, ge=4, description="Number of filter orientations.")
    gamma: Optional[float] = Field(
        PC_GAMMA, ge=0.0, description="Fixed noise threshold; None estimates it per orientation."
    )
    k: float = Field(PC_NOISE_K, ge=0.0, description="Noise standard deviations above the mean.")
    eps: float = Field(PC_EPS, gt=0.0, description="Stabilizer in the denominators.")
    min_wavelength: float = Field(PC_MIN_WAVELENGTH, ge=2.0, description="Smallest filter wavelength in pixels.")
    mult: float = Field(PC_MULT, gt=1.0, description="Wavelength ratio between successive scales.")
    sigma_on_f: float = Field(PC_SIGMA_ON_F, gt=0.0, lt=1.0, description="Log-Gabor bandwidth parameter.")
    cut_off: float = Field(PC_CUT_OFF, ge=0.0, le=1.0, description="Frequency spread below which PC is penalized.")
    g: float = Field(PC_G, gt=0.0, description="Sharpness of the frequency-spread sigmoid.")


def noise_threshold(amplitudes_smallest_scale: np.ndarray, config: PcConfig) -> float:
    """
    Rayleigh noise model fitted to the median of the finest-scale amplitudes,
    propagated to the scale-summed energy as a geometric series.
    """
    tau = float(np.median(amplitudes_smallest_scale)) / math.sqrt(math.log(4.0))
    inverse = 1.0 / config.mult
    total_tau = tau * (1.0 - inverse**config.scales) / (1.0 - inverse)
    mean = total_tau * math.sqrt(math.pi / 2.0)
    sigma = total_tau * math.sqrt((4.0 - math.pi) / 2.0)
    return mean + config.k * sigma


def _radial_filters(height: int, width: int, config: PcConfig):
    fy = np.fft.fftfreq(height)[:, None]
    fx = np.fft.fftfreq(width)[None, :]
    radius = np.sqrt(fx**2 + fy**2)
    radius[0, 0] = 1.0
    theta = np.arctan2(-fy, fx)

    lowpass = 1.0 / (1.0 + (radius / _LOWPASS_CUTOFF) ** (2 * _LOWPASS_ORDER))
    log_sigma_sq = 2.0 * math.log(config.sigma_on_f) ** 2
    radial = []
    for s in range(config.scales):
        centre = 1.0 / (config.min_wavelength * config.mult**s)
        log_gabor = np.exp(-(np.log(radius / centre) ** 2) / log_sigma_sq) * lowpass
        log_gabor[0, 0] = 0.0
        radial.append(log_gabor)
    return radial, np.sin(theta), np.cos(theta)


def phase_congruency(structure: GrayField, config: PcConfig = PcConfig()) -> GrayField:
    min_side = max(PC_MIN_SIDE, int(math.ceil(2 * config.min_wavelength)))
    if min(structure.width, structure.height) < min_side:
        raise InputError(f"Phase congruency needs at least a {min_side}x{min_side} field.")

    height, width = structure.shape
    spectrum = np.fft.fft2(structure.data)
    radial, sin_theta, cos_theta = _radial_filters(height, width, config)

    energy_total = np.zeros((height, width))
    amplitude_total = np.zeros((height, width))
    thresholds = []

    for o in range(config.orientations):
        angle = o * math.pi / config.orientations
        d_sin = sin_theta * math.cos(angle) - cos_theta * math.sin(angle)
        d_cos = cos_theta * math.cos(angle) + sin_theta * math.sin(angle)
        d_theta = np.minimum(np.abs(np.arctan2(d_sin, d_cos)) * config.orientations / 2.0, math.pi)
        spread = (np.cos(d_theta) + 1.0) / 2.0

        responses = [np.fft.ifft2(spectrum * (radial[s] * spread)) for s in range(config.scales)]
        amplitudes = [np.abs(r) for r in responses]
        sum_even = sum(r.real for r in responses)
        sum_odd = sum(r.imag for r in responses)
        sum_amplitude = sum(amplitudes)
        max_amplitude = np.maximum.reduce(amplitudes)

        norm = np.sqrt(sum_even**2 + sum_odd**2) + config.eps
        mean_even, mean_odd = sum_even / norm, sum_odd / norm

        energy = np.zeros((height, width))
        for r in responses:
            even, odd = r.real, r.imag
            energy += even * mean_even + odd * mean_odd - np.abs(even * mean_odd - odd * mean_even)

        threshold = config.gamma if config.gamma is not None else noise_threshold(amplitudes[0], config)
        thresholds.append(threshold)
        energy = np.maximum(energy - threshold, 0.0)

        spread_width = (sum_amplitude / (max_amplitude + config.eps) - 1.0) / (config.scales - 1)
        weight = 1.0 / (1.0 + np.exp((config.cut_off - spread_width) * config.g))

        energy_total += weight * energy
        amplitude_total += sum_amplitude

    pc = np.clip(energy_total / (amplitude_total + config.eps), 0.0, 1.0)
    logger.debug(
        "PhaseCongruency",
        "Map computed.",
        {"size": [width, height], "thresholds": thresholds, "mean": float(pc.mean())},
    )
    return GrayField(pc)


def structural_feature_pc(structure: GrayField, config: PcConfig = PcConfig()) -> np.ndarray:
    return np.array([float(np.mean(phase_congruency(structure, config).data))])
