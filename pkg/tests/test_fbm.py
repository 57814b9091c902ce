import math

import numpy as np
import pytest

from errors import InputError
from fbm.estimation import estimate_hurst, increment_variances
from fbm.model import FbmParams, covariance_matrix, fbm_covariance_2d, sigma_h_from_sigma_w, structure_function
from fbm.synthesis import synth_fbm_1d_exact, synth_fbm_exact, synth_fbm_spectral
from field_io.field import GrayField


@pytest.mark.parametrize("hurst", [0.0, 1.0, -0.2, 1.5, float("nan")])
def test_hurst_outside_open_interval_is_rejected(hurst):
    with pytest.raises(InputError):
        FbmParams(hurst)


def test_sigma_relation_has_continuous_limit_at_one_half():
    at_half = sigma_h_from_sigma_w(0.5, 2.0)
    assert at_half == pytest.approx(2.0 / math.sqrt(2.0))
    assert sigma_h_from_sigma_w(0.5 + 1e-4, 2.0) == pytest.approx(at_half, rel=1e-3)
    assert sigma_h_from_sigma_w(0.5 - 1e-4, 2.0) == pytest.approx(at_half, rel=1e-3)


def test_from_sigma_w_is_consistent_and_mismatch_rejected():
    params = FbmParams.from_sigma_w(0.3, 1.5)
    expected = 1.5**2 * math.cos(math.pi * 0.3) * math.gamma(1.0 - 0.6) / (2.0 * math.pi * 0.3)
    assert params.sigma_h**2 == pytest.approx(expected, rel=1e-9)
    with pytest.raises(InputError):
        FbmParams(0.3, sigma_h=1.0, sigma_w=1.5)


def test_covariance_matrix_matches_pointwise_formula(rng):
    params = FbmParams(0.35, 1.7)
    points = rng.random((6, 2)) * 5.0
    matrix = covariance_matrix(params, points)
    for a in range(6):
        for b in range(6):
            assert matrix[a, b] == pytest.approx(fbm_covariance_2d(params, points[a], points[b]), rel=1e-10)
    assert fbm_covariance_2d(params, [0.0, 0.0], [3.0, 4.0]) == 0.0


def test_structure_function():
    params = FbmParams(0.25, 2.0)
    assert structure_function(params, 3.0, 4.0) == pytest.approx(4.0 * 5.0**0.5)
    with pytest.raises(InputError):
        structure_function(params, 0.0, 0.0)


def test_exact_synthesis_is_seeded_and_pinned_at_origin():
    params = FbmParams(0.6)
    a = synth_fbm_exact(params, 16, seed=3)
    b = synth_fbm_exact(params, 16, seed=3)
    c = synth_fbm_exact(params, 16, seed=4)
    assert a == b
    assert a != c
    assert a.data[0, 0] == 0.0
    with pytest.raises(InputError):
        synth_fbm_exact(params, 1000, seed=0)


def test_exact_synthesis_covariance_monte_carlo():
    params = FbmParams(0.5)
    samples = np.array(
        [synth_fbm_exact(params, 4, seed).data[[0, 1], [1, 0]] for seed in range(500)]
    )
    x, y = samples[:, 0], samples[:, 1]
    empirical = float(np.mean(x * y))
    expected = fbm_covariance_2d(params, [1.0, 0.0], [0.0, 1.0])
    standard_error = math.sqrt((np.var(x) * np.var(y) + expected**2) / samples.shape[0])
    assert abs(empirical - expected) < 4.0 * standard_error


def test_one_dimensional_synthesis_variance():
    paths = np.array([synth_fbm_1d_exact(0.7, 32, seed) for seed in range(400)])
    # Var B(t) = t^2H; check t = 32.
    assert np.var(paths[:, -1]) == pytest.approx(32.0**1.4, rel=0.25)


def test_spectral_synthesis_needs_power_of_two():
    with pytest.raises(InputError):
        synth_fbm_spectral(FbmParams(0.5), 100, seed=0)


@pytest.mark.parametrize("hurst", [0.3, 0.7])
def test_spectral_synthesis_recovers_hurst(hurst):
    estimates = [
        estimate_hurst(synth_fbm_spectral(FbmParams(hurst), 128, seed)).h_hat for seed in range(8)
    ]
    assert abs(np.mean(estimates) - hurst) < 0.06


def test_spectral_increment_variance_matches_exact_scale():
    params = FbmParams(0.4, 2.0)
    variances = np.mean(
        [increment_variances(synth_fbm_spectral(params, 64, seed).data, 4) for seed in range(20)], axis=0
    )
    expected = [params.sigma_h**2 * r ** (2 * params.hurst) for r in range(1, 5)]
    np.testing.assert_allclose(variances, expected, rtol=0.2)


def test_estimator_on_random_walk_texture():
    walk = np.cumsum(np.random.default_rng(7).standard_normal(512))
    i, j = np.indices((256, 256))
    estimate = estimate_hurst(GrayField(walk[i + j]))
    assert abs(estimate.h_hat - 0.5) < 0.1
    assert estimate.r_squared > 0.9
    assert estimate.lags_used == [float(r) for r in range(1, 9)]


def test_estimator_clamps_smooth_ramp():
    ramp = np.tile(np.arange(32, dtype=float), (32, 1))
    estimate = estimate_hurst(GrayField(ramp))
    assert estimate.clamped
    assert estimate.h_hat == 0.99
    assert estimate.raw_slope == pytest.approx(2.0)


def test_estimator_rejects_degenerate_inputs():
    with pytest.raises(InputError):
        estimate_hurst(GrayField(np.ones((32, 32))))
    with pytest.raises(InputError):
        estimate_hurst(GrayField(np.random.default_rng(0).random((6, 6))))
    with pytest.raises(InputError):
        estimate_hurst(GrayField(np.random.default_rng(0).random((16, 16))), max_lag=8)


@pytest.mark.slow
@pytest.mark.parametrize("hurst", [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9])
def test_estimator_bias_and_spread_on_exact_fields(hurst):
    params = FbmParams(hurst)
    estimates = np.array([estimate_hurst(synth_fbm_exact(params, 64, seed)).h_hat for seed in range(100)])
    assert abs(estimates.mean() - hurst) <= 0.03
    assert estimates.std() <= 0.05
