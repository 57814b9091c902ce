import numpy as np
import pytest

from errors import InputError
from fbm.estimation import estimate_hurst
from fbm.model import FbmParams
from fbm.synthesis import synth_fbm_exact
from features.dataset import (
    TwoViewFeatures,
    class_count_of,
    entry_features,
    extract_dataset_features,
    feature_matrix,
    read_features_csv,
    write_features_csv,
)
from features.phase_congruency import PcConfig, phase_congruency, structural_feature_pc
from features.sth import SthConfig, dark_components, hist_equalize, quantize, sth_area
from features.textural import patch_hurst_estimates, textural_features
from field_io.field import GrayField, extract_patches
from field_io.manifest import load_manifest
from tests.conftest import write_pgm

DARK, BRIGHT = 0.2, 0.8


def _ellipse_mask(size, a, b, cx, cy):
    y, x = np.indices((size, size), dtype=np.float64)
    return ((x - cx) / a) ** 2 + ((y - cy) / b) ** 2 <= 1.0


def _disk(size, r, cx, cy):
    return _ellipse_mask(size, r, r, cx, cy)


def _scene(size, target, distractors):
    dark = target.copy()
    for mask in distractors:
        dark |= mask
    return GrayField(np.where(dark, DARK, BRIGHT))


# --- textural view ---


def test_patch_estimates_cover_every_full_patch():
    field = synth_fbm_exact(FbmParams(0.5), 64, seed=1)
    estimates = patch_hurst_estimates(field, 32)
    assert len(estimates) == 4
    assert all(0.0 < h < 1.0 for h in estimates)


def test_textural_features_mean_and_variance():
    field = synth_fbm_exact(FbmParams(0.4), 64, seed=2)
    estimates = patch_hurst_estimates(field, 16)
    features = textural_features(field, 16)
    assert features.shape == (2,)
    assert features[0] == pytest.approx(np.mean(estimates))
    assert features[1] == pytest.approx(np.var(estimates))


def test_max_lag_reaches_the_patch_estimates():
    field = synth_fbm_exact(FbmParams(0.5), 64, seed=1)
    short = patch_hurst_estimates(field, 32, max_lag=3)
    expected = [estimate_hurst(p, 3).h_hat for p in extract_patches(field, 32)]
    assert short == pytest.approx(expected)
    assert short != pytest.approx(patch_hurst_estimates(field, 32))
    assert textural_features(field, 32, max_lag=3)[0] == pytest.approx(np.mean(expected))


def test_two_region_composite_spreads_the_estimates():
    rough = synth_fbm_exact(FbmParams(0.2), 64, seed=4).data
    smooth = synth_fbm_exact(FbmParams(0.8), 64, seed=5).data
    features = textural_features(GrayField(np.hstack([rough, smooth])), 32)
    assert features[1] >= 0.05


def test_constant_patches_are_skipped():
    data = synth_fbm_exact(FbmParams(0.5), 64, seed=3).data.copy()
    data[:32, :32] = 1.0
    assert len(patch_hurst_estimates(GrayField(data), 32)) == 3
    with pytest.raises(InputError):
        textural_features(GrayField(np.ones((64, 64))), 32)


@pytest.mark.slow
def test_patch_mean_tracks_hurst_on_exact_fbm():
    means = [textural_features(synth_fbm_exact(FbmParams(0.5), 64, seed), 32)[0] for seed in range(40)]
    assert abs(np.mean(means) - 0.5) <= 0.06


# --- phase congruency ---


def test_constant_image_has_no_phase_congruency():
    pc = phase_congruency(GrayField(np.full((32, 32), 0.3)))
    np.testing.assert_allclose(pc.data, 0.0, atol=1e-9)


def test_phase_congruency_is_contrast_invariant(rng):
    data = rng.standard_normal((48, 48))
    config = PcConfig(gamma=0.0)
    base = phase_congruency(GrayField(data), config).data
    scaled = phase_congruency(GrayField(3.0 * data + 0.5), config).data
    assert base.min() >= 0.0 and base.max() <= 1.0
    np.testing.assert_allclose(scaled, base, atol=5e-3)


def _step_edge():
    data = np.zeros((64, 64))
    data[:, 32:] = 1.0
    return GrayField(data)


def test_phase_congruency_peaks_on_step_edge():
    column_means = phase_congruency(_step_edge()).data.mean(axis=0)
    assert int(np.argmax(column_means)) in (0, 31, 32, 63)
    assert column_means[30:34].max() >= 0.6
    # Columns more than 8 px from both the middle edge and the periodic wrap edge.
    far = np.r_[8:24, 40:56]
    assert column_means[far].max() <= 0.1


def test_white_noise_has_low_phase_congruency(rng):
    noise = phase_congruency(GrayField(rng.random((64, 64)))).data
    assert noise.mean() <= 0.15
    assert phase_congruency(_step_edge()).data.mean() > noise.mean()


def test_structural_pc_feature_and_limits(rng):
    feature = structural_feature_pc(GrayField(rng.random((32, 32))))
    assert feature.shape == (1,)
    assert 0.0 <= feature[0] <= 1.0
    with pytest.raises(InputError):
        phase_congruency(GrayField(rng.random((8, 8))))
    with pytest.raises(ValueError):
        PcConfig(orientations=3)


# --- structure thresholding ---


def test_quantize_levels_and_range_check():
    assert quantize(GrayField(np.array([[0.0, 0.2, 0.5, 1.0]])), 5).tolist() == [[0, 1, 2, 4]]
    with pytest.raises(InputError):
        quantize(GrayField(np.array([[1.5]])), 5)
    with pytest.raises(InputError):
        quantize(GrayField(np.array([[0.5]])), 1)


def test_two_level_image_equalizes_to_its_cdf():
    data = np.where(np.arange(64).reshape(8, 8) % 2 == 0, 0.2, 0.8)
    equalized = hist_equalize(GrayField(data)).data
    np.testing.assert_allclose(equalized[data == 0.2], 0.5)
    np.testing.assert_allclose(equalized[data == 0.8], 1.0)
    assert quantize(GrayField(np.array([[0.59]])), 5).tolist() == [[2]]


def test_equalizing_a_uniform_histogram_is_near_identity():
    values = (np.arange(256) + 0.5) / 256.0
    field = GrayField(values.reshape(16, 16))
    assert np.max(np.abs(hist_equalize(field).data - field.data)) < 1.0 / 256.0


def test_config_validation():
    with pytest.raises(ValueError):
        SthConfig(quant_levels=5, dark_threshold=5)
    with pytest.raises(ValueError):
        SthConfig(connectivity=6)


def test_empty_mask_is_an_input_error():
    with pytest.raises(InputError):
        sth_area(GrayField(np.full((32, 32), 0.5)))
    with pytest.raises(InputError):
        sth_area(GrayField(np.zeros((8, 8))))


def test_components_report_xy_centroids():
    data = np.full((32, 32), BRIGHT)
    data[4:8, 20:26] = DARK
    labels, centroids = dark_components(GrayField(data))
    assert labels.max() == 1
    np.testing.assert_allclose(centroids, [[22.5, 5.5]])


def test_ellipses_with_distractors_are_measured_exactly():
    size = 128
    centre = (size - 1) / 2.0
    distractors = [_disk(size, 5, 12, 12), _disk(size, 5, 115, 12), _disk(size, 5, 12, 115), _disk(size, 5, 115, 115)]
    checked = 0
    for a in range(6, 26, 2):
        for ratio in (0.6, 1.0, 1.5):
            target = _ellipse_mask(size, a, a * ratio, centre, centre)
            assert sth_area(_scene(size, target, distractors)) == float(target.sum())
            checked += 1
    assert checked == 30


def test_roi_centre_selects_another_component():
    size = 64
    target = _ellipse_mask(size, 10, 8, 31.5, 31.5)
    corner = _disk(size, 4, 8, 8)
    config = SthConfig(roi_center=(8.0, 8.0))
    assert sth_area(_scene(size, target, [corner]), config) == float(corner.sum())


def test_monotone_intensity_remap_keeps_area():
    size = 64
    y, x = np.indices((size, size))
    data = np.full((size, size), 0.95)
    data[x < 16] = 0.7
    data[_ellipse_mask(size, 12, 9, 31.5, 31.5)] = 0.1
    data[_disk(size, 3, 50, 50)] = 0.4
    field = GrayField(data)
    assert sth_area(field) == sth_area(GrayField(np.sqrt(data)))


# --- dataset rows ---


def test_feature_row_validation():
    with pytest.raises(InputError):
        TwoViewFeatures("a", np.array([1.2, 0.0]), np.array([0.3]), 0)
    with pytest.raises(InputError):
        TwoViewFeatures("a", np.array([0.5, 0.0]), np.array([-0.1]), 0)
    with pytest.raises(InputError):
        TwoViewFeatures("a", np.array([0.5, np.inf]), np.array([0.1]), 0)
    with pytest.raises(InputError):
        TwoViewFeatures("a", np.array([0.5, 0.0]), np.array([0.1]), -1)


def test_feature_matrix_views_and_class_count():
    rows = [
        TwoViewFeatures("a", [0.3, 0.01], [0.2], 0),
        TwoViewFeatures("b", [0.6, 0.02], [0.4], 2),
    ]
    assert feature_matrix(rows, "texture").shape == (2, 2)
    assert feature_matrix(rows, "structure").shape == (2, 1)
    assert feature_matrix(rows, "both").tolist() == [[0.3, 0.01, 0.2], [0.6, 0.02, 0.4]]
    assert class_count_of(rows) == 3
    assert class_count_of(rows, 4) == 4
    with pytest.raises(InputError):
        class_count_of(rows, 2)
    with pytest.raises(InputError):
        feature_matrix(rows, "colour")


def test_features_csv_keeps_values_exactly(tmp_path):
    rows = [
        TwoViewFeatures("img/a.pgm", [0.123456789012345, 0.000123], [0.75], 0),
        TwoViewFeatures("img/b.pgm", [0.9, 1e-9], [0.0], 1),
    ]
    path = str(tmp_path / "f.csv")
    write_features_csv(path, rows)
    assert open(path).readline().strip() == "path,label,phi_t_0,phi_t_1,phi_s_0"
    back = read_features_csv(path)
    assert [r.path for r in back] == ["img/a.pgm", "img/b.pgm"]
    assert np.array_equal(feature_matrix(back, "both"), feature_matrix(rows, "both"))


def test_malformed_features_csv(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("path,label,phi_t_0\na,zero,0.5\n")
    with pytest.raises(InputError):
        read_features_csv(str(bad))
    with pytest.raises(InputError):
        read_features_csv(str(tmp_path / "missing.csv"))


def _manifest(tmp_path, count=2):
    lines = ["path,label"]
    for label, hurst in (("rough", 0.3), ("smooth", 0.8)):
        for seed in range(count):
            field = synth_fbm_exact(FbmParams(hurst), 64, seed).data
            field = (field - field.min()) / (field.max() - field.min())
            name = f"{label}{seed}.pgm"
            write_pgm(tmp_path / name, field)
            lines.append(f"{name},{label}")
    (tmp_path / "m.csv").write_text("\n".join(lines) + "\n")
    return load_manifest(str(tmp_path / "m.csv"))


def test_entry_features_for_each_mode(tmp_path):
    entry = _manifest(tmp_path).entries[0]
    both = entry_features(entry, "both", "pc")
    assert both.phi_t.shape == (2,) and both.phi_s.shape == (1,)
    texture_only = entry_features(entry, "texture")
    assert texture_only.phi_s.size == 0
    assert np.array_equal(texture_only.phi_t, both.phi_t)
    structure_only = entry_features(entry, "structure", "sth")
    assert structure_only.phi_t.size == 0
    assert 0.0 < structure_only.phi_s[0] <= 1.0
    with pytest.raises(InputError):
        entry_features(entry, "both", "gabor")


def test_dataset_extraction_keeps_manifest_order(tmp_path):
    manifest = _manifest(tmp_path)
    rows = extract_dataset_features(manifest)
    assert [r.path for r in rows] == [e.path for e in manifest.entries]
    assert [r.label for r in rows] == [0, 0, 1, 1]


def test_dataset_extraction_passes_max_lag(tmp_path):
    manifest = _manifest(tmp_path)
    short = extract_dataset_features(manifest, view="texture", max_lag=3)
    default = extract_dataset_features(manifest, view="texture")
    assert np.array_equal(short[0].phi_t, entry_features(manifest.entries[0], "texture", max_lag=3).phi_t)
    assert any(not np.allclose(a.phi_t, b.phi_t) for a, b in zip(short, default))
