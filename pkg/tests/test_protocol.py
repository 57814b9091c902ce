import json

import numpy as np
import pytest

from classify.fusion_net import FusionConfig
from classify.metrics import compute_metrics, confusion_matrix
from classify.protocol import COLUMNS, RepeatSummary, repeat_eval
from classify.serialization import FORMAT_TAG, load_model, save_model
from classify.split import SplitPlan, default_test_count, make_split
from classify.synthetic import make_complementary_views
from classify.two_view import (
    TwoViewConfig,
    evaluate,
    fused_distances,
    predict_two_view,
    train_two_view,
    train_view_svm,
)
from errors import InputError
from features.dataset import TwoViewFeatures

FAST = TwoViewConfig(fusion=FusionConfig(epochs=300, restarts=2))


# --- split ---


def test_reference_split_sizes_and_disjointness():
    plan = make_split(240, None, seed=5)
    assert (len(plan.svm_train), len(plan.test), len(plan.nn_train)) == (120, 40, 80)
    assert sorted(plan.svm_train + plan.test + plan.nn_train) == list(range(240))
    assert plan.test == sorted(plan.test)
    assert plan.size == 240


def test_split_is_disjoint_and_covering_for_every_seed():
    for seed in range(1000):
        plan = make_split(50, None, seed)
        parts = plan.svm_train + plan.test + plan.nn_train
        assert sorted(parts) == list(range(50))
        assert len(plan.svm_train) == 25


def test_split_is_seeded():
    assert make_split(60, 10, seed=1) == make_split(60, 10, seed=1)
    assert make_split(60, 10, seed=1) != make_split(60, 10, seed=2)


def test_split_gives_svm_half_every_class():
    labels = [0] * 27 + [1] * 27 + [2] * 3 + [3] * 3
    for seed in range(10):
        plan = make_split(60, 10, seed, labels)
        assert {labels[i] for i in plan.svm_train} == {0, 1, 2, 3}


def test_split_limits():
    assert default_test_count(240) == 40
    assert default_test_count(120) == 20
    assert default_test_count(100) == 17
    with pytest.raises(InputError):
        make_split(10, 8, seed=0)
    with pytest.raises(InputError):
        SplitPlan([0, 1], [1], [2], 0)


# --- metrics ---


def test_binary_metrics_use_class_one_as_positive():
    metrics = compute_metrics([1, 1, 0, 0, 1], [1, 0, 0, 1, 1], 2)
    assert metrics.accuracy == pytest.approx(0.6)
    assert metrics.precision == pytest.approx(2 / 3)
    assert metrics.recall == pytest.approx(2 / 3)
    assert metrics.specificity == pytest.approx(0.5)
    assert metrics.f_measure == pytest.approx(2 * metrics.precision * metrics.recall / (metrics.precision + metrics.recall), abs=1e-12)
    assert metrics.confusion == [[1, 1], [1, 2]]


def test_zero_division_counts_as_zero():
    metrics = compute_metrics([0, 1, 1], [0, 0, 0], 2)
    assert metrics.precision == 0.0
    assert metrics.recall == 0.0
    assert metrics.f_measure == 0.0
    assert metrics.specificity == 1.0


def test_multiclass_metrics_are_macro_averaged():
    y_true = [0, 0, 1, 1, 2, 2]
    y_pred = [0, 1, 1, 1, 2, 0]
    metrics = compute_metrics(y_true, y_pred, 3)
    assert metrics.accuracy == pytest.approx(4 / 6)
    assert metrics.precision == pytest.approx(np.mean([1 / 2, 2 / 3, 1.0]))
    assert metrics.recall == pytest.approx(np.mean([1 / 2, 1.0, 1 / 2]))
    assert metrics.specificity == pytest.approx(np.mean([3 / 4, 3 / 4, 1.0]))
    assert confusion_matrix(y_true, y_pred, 3).sum() == 6


def test_metric_input_errors():
    with pytest.raises(InputError):
        compute_metrics([], [], 2)
    with pytest.raises(InputError):
        compute_metrics([0, 1], [0], 2)
    with pytest.raises(InputError):
        compute_metrics([0, 3], [0, 1], 2)


# --- synthetic complementary views ---


def test_complementary_views_layout():
    rows = make_complementary_views(6, 60, seed=0)
    assert [r.label for r in rows[:7]] == [0, 1, 2, 3, 4, 5, 0]
    assert all(r.phi_t.shape == (2,) and r.phi_s.shape == (2,) for r in rows)
    t_groups = {r.label: round((r.phi_t[0] - 0.5) / 0.1) for r in rows}
    s_groups = {r.label: round((r.phi_s[0] - 1.0) / 0.1) for r in rows}
    assert t_groups[0] == t_groups[1] and t_groups[2] == t_groups[3]
    assert s_groups[0] == s_groups[3] and s_groups[1] == s_groups[4]
    assert t_groups[0] != t_groups[2] and s_groups[0] != s_groups[1]
    with pytest.raises(InputError):
        make_complementary_views(5, 60, seed=0)


# --- two-view model ---


@pytest.fixture(scope="module")
def synthetic_rows():
    return make_complementary_views(4, 96, seed=3)


@pytest.fixture(scope="module")
def trained(synthetic_rows):
    return train_two_view(synthetic_rows, 4, FAST, seed=2)


def test_two_view_training_uses_the_split(trained, synthetic_rows):
    plan = trained.plan
    assert (len(plan.svm_train), len(plan.test), len(plan.nn_train)) == (48, 16, 32)
    assert trained.svm_t.pairs == trained.svm_s.pairs == [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
    assert fused_distances(trained, synthetic_rows[:3]).shape == (3, 12)
    assert len(trained.net.history.monitor_loss) == 300


def test_two_view_predictions_and_evaluation(trained, synthetic_rows):
    test_rows = [synthetic_rows[i] for i in trained.plan.test]
    predictions = predict_two_view(trained, test_rows)
    assert predictions.shape == (16,)
    assert set(predictions.tolist()) <= {0, 1, 2, 3}
    metrics = evaluate(trained, test_rows)
    assert metrics.accuracy == pytest.approx(np.mean(predictions == [r.label for r in test_rows]))


def test_two_view_needs_both_views(synthetic_rows):
    texture_only = [TwoViewFeatures(r.path, r.phi_t, np.empty(0), r.label) for r in synthetic_rows]
    with pytest.raises(InputError):
        train_two_view(texture_only, 4, FAST, seed=0)


def test_single_view_baseline(synthetic_rows):
    metrics = train_view_svm(synthetic_rows[:60], synthetic_rows[60:], "both", 4)
    assert 0.0 <= metrics.accuracy <= 1.0
    assert np.sum(metrics.confusion) == 36


def test_saved_model_predicts_identically(tmp_path, trained, synthetic_rows):
    path = str(tmp_path / "model.json")
    save_model(trained, path)
    payload = json.loads(open(path).read())
    assert payload["format"] == FORMAT_TAG
    assert payload["pair_order"] == "lexicographic"
    assert payload["fusion_layers"][0]["weights"]["shape"] == [12, 8]
    loaded = load_model(path)
    assert loaded.plan == trained.plan
    np.testing.assert_array_equal(fused_distances(loaded, synthetic_rows), fused_distances(trained, synthetic_rows))
    np.testing.assert_array_equal(predict_two_view(loaded, synthetic_rows), predict_two_view(trained, synthetic_rows))


def test_malformed_model_files(tmp_path, trained):
    missing = str(tmp_path / "none.json")
    with pytest.raises(InputError):
        load_model(missing)
    broken = tmp_path / "broken.json"
    broken.write_text("{not json")
    with pytest.raises(InputError):
        load_model(str(broken))
    path = str(tmp_path / "model.json")
    save_model(trained, path)
    payload = json.loads(open(path).read())
    payload["svm_t"]["pairs"].reverse()
    reordered = tmp_path / "reordered.json"
    reordered.write_text(json.dumps(payload))
    with pytest.raises(InputError):
        load_model(str(reordered))


# --- repeated protocol ---


def test_repeat_summary_layout_and_determinism():
    rows = make_complementary_views(4, 48, seed=1)
    first = repeat_eval(rows, 4, FAST, repetitions=2, base_seed=7)
    second = repeat_eval(rows, 4, FAST, repetitions=2, base_seed=7)
    assert [r.seed for r in first.repetitions] == [7, 8]
    header = RepeatSummary.header()
    assert header[:3] == ["rep", "seed", "T_accuracy"]
    assert len(header) == 2 + 5 * len(COLUMNS)
    assert all(len(row) == len(header) for row in first.rows())
    assert first.rows() == second.rows()
    assert len(first.plot_rows()) == 2 * len(COLUMNS)
    fused = [r.metrics["fused"].accuracy for r in first.repetitions]
    assert first.mean["fused"]["accuracy"] == pytest.approx(np.mean(fused))
    assert first.std["fused"]["accuracy"] == pytest.approx(np.std(fused))


def test_parallel_repetitions_match_serial():
    rows = make_complementary_views(4, 48, seed=1)
    serial = repeat_eval(rows, 4, FAST, repetitions=2, base_seed=0)
    parallel = repeat_eval(rows, 4, FAST, repetitions=2, base_seed=0, workers=2)
    assert serial.rows() == parallel.rows()
    with pytest.raises(InputError):
        repeat_eval(rows, 4, FAST, repetitions=0)


@pytest.mark.slow
def test_two_view_fusion_beats_single_views():
    rows = make_complementary_views(6, 240, seed=0)
    summary = repeat_eval(rows, 6, TwoViewConfig(), repetitions=10, base_seed=0)
    fused = summary.mean["fused"]["accuracy"]
    assert fused >= summary.mean["T"]["accuracy"] + 0.05
    assert fused >= summary.mean["S"]["accuracy"] + 0.05
    assert fused >= summary.mean["TconcatS"]["accuracy"] - 0.02


@pytest.mark.slow
def test_duplicated_views_fuse_to_the_single_view():
    rows = [
        TwoViewFeatures(r.path, r.phi_t, r.phi_t.copy(), r.label) for r in make_complementary_views(6, 600, seed=0)
    ]
    summary = repeat_eval(rows, 6, TwoViewConfig(), repetitions=10, base_seed=0)
    single = summary.mean["T"]["accuracy"]
    assert summary.mean["S"]["accuracy"] == pytest.approx(single)
    assert abs(summary.mean["fused"]["accuracy"] - single) <= 0.02
