# cmd_pipeline.py: The 'pipeline' subcommand.
# Runs decomposition and feature extraction over a manifest, trains one
# two-view model, then the repeated protocol, writing every result under
# one output directory. Identical inputs and seed give identical files.

import os

from classify.fusion_net import history_summary
from classify.protocol import repeat_eval
from classify.serialization import save_model
from classify.two_view import evaluate, train_two_view
from errors import InputError
from features.dataset import class_count_of, write_features_csv
from field_io.manifest import load_manifest
from logger import logger
from nst_tools.cmd_classify import write_curves, write_repeat
from nst_tools.cmd_features import extract_from_config
from nst_tools.common import emit_json, load_config, make_parser, report
from utils.reporting import write_json

FEATURES_FILE = "features.csv"
MODEL_FILE = "model.json"
REPEAT_FILE = "repeat.csv"
CURVES_FILE = "curves.csv"
SUMMARY_FILE = "summary.json"


def register():
    return {
        "pipeline": {
            "func": cmd_pipeline,
            "alias": ["run"],
            "help": "Manifest to features, model and repeated evaluation in one go.",
        }
    }


def cmd_pipeline(args, style):
    parser = make_parser("pipeline", "End-to-end run: decompose, features, train, repeat.")
    parser.add_argument("--manifest", required=True, help="Dataset manifest CSV.")
    parser.add_argument("--out-dir", help="Output directory (created if missing).")
    parser.add_argument("--reps", type=int, help="Protocol repetitions (default 10).")
    parser.add_argument("--seed", type=int, help="Run seed.")
    parser.add_argument("--k", type=int, help="Class count (default from the manifest).")
    parser.add_argument("--workers", type=int, help="Worker processes.")
    parser.add_argument("--no-curves", action="store_true", help="Skip the training curves CSV.")
    parsed = parser.parse_args(args)

    config = load_config(
        parsed,
        output_dir=parsed.out_dir,
        repetitions=parsed.reps,
        seed=parsed.seed,
        workers=parsed.workers,
    )
    if config.view != "both":
        raise InputError("The pipeline trains on both views; set view = \"both\".")
    out_dir = config.output_dir
    os.makedirs(out_dir, exist_ok=True)

    manifest = load_manifest(parsed.manifest)
    rows = extract_from_config(manifest, config)
    write_features_csv(os.path.join(out_dir, FEATURES_FILE), rows)
    report(style, "PIPELINE", f"{len(rows)} feature rows extracted.")

    k = class_count_of(rows, parsed.k if parsed.k is not None else manifest.class_count)
    two_view = config.two_view()
    model = train_two_view(rows, k, two_view, config.seed)
    save_model(model, os.path.join(out_dir, MODEL_FILE))
    if not parsed.no_curves:
        write_curves(os.path.join(out_dir, CURVES_FILE), model)
    test_metrics = evaluate(model, [rows[i] for i in model.plan.test])
    report(style, "PIPELINE", f"Model trained, test accuracy {test_metrics.accuracy:.3f}.")

    summary = repeat_eval(rows, k, two_view, config.repetitions, config.seed, config.workers)
    write_repeat(os.path.join(out_dir, REPEAT_FILE), summary)

    result = {
        "examples": len(rows),
        "class_count": k,
        "seed": config.seed,
        "structural_mode": config.structural_mode,
        "repetitions": config.repetitions,
        "training": history_summary(model.net.history),
        "test_metrics": test_metrics,
        "mean": summary.mean,
        "std": summary.std,
    }
    write_json(os.path.join(out_dir, SUMMARY_FILE), result)
    logger.info("Pipeline", "Pipeline finished.", {"out_dir": out_dir, "mean_accuracy": summary.mean["fused"]["accuracy"]})
    report(style, "PIPELINE", f"Fused mean accuracy {summary.mean['fused']['accuracy']:.3f} -> {out_dir}")
    emit_json(result)
    return 0
