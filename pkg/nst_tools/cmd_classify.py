# cmd_classify.py: The 'train', 'evaluate' and 'repeat' subcommands.
# All three read a features CSV written by 'features'. Models are stored as
# JSON with explicit matrix shapes (see classify/serialization.py).

from classify.fusion_net import history_summary
from classify.protocol import RepeatSummary, repeat_eval
from classify.serialization import load_model, save_model
from classify.two_view import evaluate, train_two_view
from errors import InputError
from features.dataset import class_count_of, read_features_csv
from nst_tools.common import emit_json, load_config, make_parser, report
from utils.reporting import write_csv

CURVE_HEADER = ["epoch", "train_loss", "train_accuracy", "monitor_loss", "monitor_accuracy"]
PLOT_HEADER = ["rep", "column", "accuracy"]


def register():
    return {
        "train": {
            "func": cmd_train,
            "alias": [],
            "help": "Train the two-view SVM + fusion-net classifier on a features CSV.",
        },
        "evaluate": {
            "func": cmd_evaluate,
            "alias": ["eval"],
            "help": "Score a saved model on a features CSV.",
        },
        "repeat": {
            "func": cmd_repeat,
            "alias": [],
            "help": "Repeated random-split evaluation against the single-view baselines.",
        },
    }


def write_curves(path: str, model):
    write_csv(path, CURVE_HEADER, model.net.history.rows())


def write_repeat(path: str, summary: RepeatSummary):
    write_csv(path, RepeatSummary.header(), summary.rows())


def cmd_train(args, style):
    parser = make_parser("train", "Train the fused two-view classifier.")
    parser.add_argument("--features", required=True, help="Features CSV.")
    parser.add_argument("--k", type=int, help="Class count (default: largest label + 1).")
    parser.add_argument("--seed", type=int, help="Split and initialization seed.")
    parser.add_argument("--out", required=True, help="Model JSON.")
    parser.add_argument("--curves", help="Per-epoch fusion training curves CSV.")
    parsed = parser.parse_args(args)

    config = load_config(parsed, seed=parsed.seed)
    rows = read_features_csv(parsed.features)
    k = class_count_of(rows, parsed.k)
    model = train_two_view(rows, k, config.two_view(), config.seed)
    save_model(model, parsed.out)
    if parsed.curves:
        write_curves(parsed.curves, model)

    test_metrics = evaluate(model, [rows[i] for i in model.plan.test])
    report(style, "TRAIN", f"k={k}, test accuracy {test_metrics.accuracy:.3f} -> {parsed.out}")
    emit_json(
        {
            "class_count": k,
            "seed": config.seed,
            "split": {
                "svm_train": len(model.plan.svm_train),
                "nn_train": len(model.plan.nn_train),
                "test": len(model.plan.test),
            },
            "history": history_summary(model.net.history),
            "test_metrics": test_metrics,
        }
    )
    return 0


def cmd_evaluate(args, style):
    parser = make_parser("evaluate", "Score a saved two-view model.")
    parser.add_argument("--model", required=True, help="Model JSON from 'train'.")
    parser.add_argument("--features", required=True, help="Features CSV.")
    parser.add_argument(
        "--split-test",
        action="store_true",
        help="Score only the test indices stored with the model (same CSV as training).",
    )
    parsed = parser.parse_args(args)

    model = load_model(parsed.model)
    rows = read_features_csv(parsed.features)
    if parsed.split_test:
        if model.plan.size != len(rows):
            raise InputError(
                f"The model was split over {model.plan.size} rows but {parsed.features} has {len(rows)}."
            )
        rows = [rows[i] for i in model.plan.test]
    if any(row.label >= model.class_count for row in rows):
        raise InputError(f"Labels exceed the model's {model.class_count} classes.")

    metrics = evaluate(model, rows)
    report(style, "EVALUATE", f"{len(rows)} rows, accuracy {metrics.accuracy:.3f}")
    emit_json(metrics)
    return 0


def cmd_repeat(args, style):
    parser = make_parser("repeat", "Repeated evaluation protocol (T, S, TconcatS, fused).")
    parser.add_argument("--features", required=True, help="Features CSV.")
    parser.add_argument("--k", type=int, help="Class count (default: largest label + 1).")
    parser.add_argument("--reps", type=int, help="Repetitions (default 10).")
    parser.add_argument("--seed", type=int, help="Base seed; repetition r uses seed + r.")
    parser.add_argument("--workers", type=int, help="Worker processes.")
    parser.add_argument("--out", required=True, help="Per-repetition metrics CSV.")
    parser.add_argument("--emit-plot-csv", help="Tidy (rep, column, accuracy) CSV.")
    parsed = parser.parse_args(args)

    config = load_config(parsed, seed=parsed.seed, repetitions=parsed.reps, workers=parsed.workers)
    rows = read_features_csv(parsed.features)
    k = class_count_of(rows, parsed.k)
    summary = repeat_eval(rows, k, config.two_view(), config.repetitions, config.seed, config.workers)
    write_repeat(parsed.out, summary)
    if parsed.emit_plot_csv:
        write_csv(parsed.emit_plot_csv, PLOT_HEADER, summary.plot_rows())

    accuracies = ", ".join(f"{c}={summary.mean[c]['accuracy']:.3f}" for c in summary.mean)
    report(style, "REPEAT", f"{config.repetitions} repetitions: {accuracies}")
    emit_json({"repetitions": config.repetitions, "mean": summary.mean, "std": summary.std})
    return 0
