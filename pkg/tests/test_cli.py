import json
import os

import numpy as np
import pytest

import nst
from errors import NumericalError
from fbm.model import FbmParams
from fbm.synthesis import synth_fbm_exact
from field_io.image_io import read_image, read_raw
from tests.conftest import write_pgm

SMALL_RUN = "patch_size = 16\nnn.epochs = 40\n"


def _run(capsys, *argv):
    code = nst.run(list(argv))
    out = capsys.readouterr().out
    return code, out


def _dataset(tmp_path, per_class=8, size=32):
    lines = ["path,label"]
    for label, hurst in (("rough", 0.2), ("smooth", 0.8)):
        for seed in range(per_class):
            data = synth_fbm_exact(FbmParams(hurst), size, seed).data
            name = f"{label}_{seed}.pgm"
            write_pgm(tmp_path / name, (data - data.min()) / (data.max() - data.min()))
            lines.append(f"{name},{label}")
    manifest = tmp_path / "manifest.csv"
    manifest.write_text("\n".join(lines) + "\n")
    config = tmp_path / "run.cfg"
    config.write_text(SMALL_RUN)
    return str(manifest), str(config)


def test_help_and_usage_errors(capsys):
    code, out = _run(capsys, "help")
    assert code == 0
    assert "synth" in out and "pipeline" in out
    assert nst.run(["frobnicate"]) == 1
    assert nst.run(["synth", "--no-such-flag"]) == 1
    assert nst.run([]) == 1


def test_synth_then_estimate(tmp_path, capsys):
    out_pgm, out_raw = str(tmp_path / "f.pgm"), str(tmp_path / "f.raw")
    code, out = _run(capsys, "synth", "--hurst", "0.6", "--size", "32", "--seed", "3", "--out", out_pgm, "--out-raw", out_raw)
    assert code == 0
    result = json.loads(out)
    assert result["method"] == "exact"
    raw = read_raw(out_raw)
    assert result["min"] == pytest.approx(float(raw.data.min()))
    image = read_image(out_pgm)
    assert image.shape == (32, 32)
    assert image.data.min() == 0.0 and image.data.max() == 1.0

    code, out = _run(capsys, "estimate-hurst", "--in", out_raw)
    assert code == 0
    assert 0.0 < json.loads(out)["h_hat"] < 1.0
    code, out = _run(capsys, "hurst", "--in", out_raw, "--max-lag", "4")
    assert json.loads(out)["lags_used"] == [1.0, 2.0, 3.0, 4.0]


def test_synth_is_reproducible(tmp_path, capsys):
    for name in ("a.pgm", "b.pgm"):
        assert nst.run(["synth", "--hurst", "0.3", "--size", "16", "--seed", "5", "--out", str(tmp_path / name)]) == 0
    assert (tmp_path / "a.pgm").read_bytes() == (tmp_path / "b.pgm").read_bytes()


def test_input_and_numerical_failures_map_to_exit_codes(tmp_path, monkeypatch):
    assert nst.run(["estimate-hurst", "--in", str(tmp_path / "missing.pgm")]) == 1
    assert nst.run(["synth", "--hurst", "1.5", "--size", "16", "--out", str(tmp_path / "x.pgm")]) == 1

    write_pgm(tmp_path / "n.pgm", np.random.default_rng(0).random((32, 32)))

    def _fail(*args, **kwargs):
        raise NumericalError("forced")

    monkeypatch.setattr("nst_tools.cmd_fbm.estimate_hurst", _fail)
    assert nst.run(["estimate-hurst", "--in", str(tmp_path / "n.pgm")]) == 2


def test_decompose_and_selfsim(tmp_path, capsys):
    data = synth_fbm_exact(FbmParams(0.5), 32, 1).data
    source = write_pgm(tmp_path / "in.pgm", (data - data.min()) / (data.max() - data.min()))
    structure, texture, raw = (str(tmp_path / n) for n in ("s.pgm", "t.pgm", "t.raw"))
    code, out = _run(
        capsys, "decompose", "--in", source, "--out-structure", structure, "--out-texture", texture,
        "--out-raw", raw, "--iterations", "2",
    )
    assert code == 0
    assert len(json.loads(out)["objective_history"]) == 3
    np.testing.assert_allclose(read_image(structure).data + read_raw(raw).data, read_image(source).data, atol=0.5 / 255 + 1e-9)

    csv_path = str(tmp_path / "levels.csv")
    code, out = _run(capsys, "selfsim", "--in", source, structure, "--hurst", "0.5", "--emit-csv", csv_path)
    assert code == 0
    result = json.loads(out)
    assert len(result["reports"]) == 2
    assert result["mean"]["hurst_used"] == 0.5
    lines = open(csv_path).read().splitlines()
    assert lines[0] == "image,level,sigma_hat,count,excess_kurtosis"
    assert len(lines) == 1 + 2 * 3


def test_features_train_evaluate_repeat(tmp_path, capsys):
    manifest, config = _dataset(tmp_path)
    features = str(tmp_path / "features.csv")
    assert nst.run(["features", "--config", config, "--manifest", manifest, "--out", features]) == 0
    assert len(open(features).read().splitlines()) == 17

    model, curves = str(tmp_path / "model.json"), str(tmp_path / "curves.csv")
    code, out = _run(capsys, "train", "--config", config, "--features", features, "--seed", "1", "--out", model, "--curves", curves)
    assert code == 0
    trained = json.loads(out)
    assert trained["class_count"] == 2
    assert sum(trained["split"].values()) == 16
    assert open(curves).readline().strip() == "epoch,train_loss,train_accuracy,monitor_loss,monitor_accuracy"

    code, out = _run(capsys, "evaluate", "--model", model, "--features", features, "--split-test")
    assert code == 0
    assert json.loads(out)["accuracy"] == pytest.approx(trained["test_metrics"]["accuracy"])

    repeat = str(tmp_path / "repeat.csv")
    code, out = _run(capsys, "repeat", "--config", config, "--features", features, "--reps", "2", "--out", repeat)
    assert code == 0
    assert set(json.loads(out)["mean"]) == {"T", "S", "TconcatS", "fused"}
    assert len(open(repeat).read().splitlines()) == 3


def test_pipeline_is_byte_reproducible(tmp_path, capsys):
    manifest, config = _dataset(tmp_path)
    outputs = []
    for name in ("run1", "run2"):
        out_dir = str(tmp_path / name)
        code, _ = _run(capsys, "pipeline", "--config", config, "--manifest", manifest, "--out-dir", out_dir, "--reps", "2", "--seed", "1")
        assert code == 0
        outputs.append(
            {f: open(os.path.join(out_dir, f), "rb").read() for f in ("features.csv", "model.json", "repeat.csv", "summary.json", "curves.csv")}
        )
    assert outputs[0] == outputs[1]
    summary = json.loads(outputs[0]["summary.json"])
    assert summary["examples"] == 16 and summary["repetitions"] == 2
