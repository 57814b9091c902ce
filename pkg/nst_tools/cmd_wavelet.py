# cmd_wavelet.py: The 'selfsim' subcommand.
# Reports wavelet-domain self-similarity per image and the mean over all
# given images; optional CSVs carry per-level statistics and tidy
# (image, metric, value) rows for plotting.

from errors import InputError
from nst_tools.common import emit_json, load_field, make_parser, report
from utils.reporting import to_plain, write_csv
from wavelet.selfsim import aggregate_reports, self_similarity_report


def register():
    return {
        "selfsim": {
            "func": cmd_selfsim,
            "alias": [],
            "help": "Wavelet self-similarity distances (KL, L1, L2, Linf) of one or more images.",
        }
    }


def cmd_selfsim(args, style):
    parser = make_parser("selfsim", "Haar-domain self-similarity report.")
    parser.add_argument("--in", dest="inputs", nargs="+", required=True, help="Images or .raw dumps.")
    parser.add_argument("--hurst", type=float, help="Use this H instead of estimating it per image.")
    parser.add_argument("--emit-csv", help="Write (image, level, sigma_hat, count, kurtosis) rows.")
    parser.add_argument("--emit-plot-csv", help="Write tidy (image, metric, value) rows.")
    parsed = parser.parse_args(args)

    reports = []
    for path in parsed.inputs:
        reports.append((path, self_similarity_report(load_field(path), parsed.hurst)))
    if not reports:
        raise InputError("No images given.")

    if parsed.emit_csv:
        write_csv(
            parsed.emit_csv,
            ["image", "level", "sigma_hat", "count", "excess_kurtosis"],
            (
                [path, s.level, s.sigma_hat, s.count, "" if s.excess_kurtosis is None else s.excess_kurtosis]
                for path, rep in reports
                for s in rep.level_stats
            ),
        )
    if parsed.emit_plot_csv:
        write_csv(
            parsed.emit_plot_csv,
            ["image", "metric", "value"],
            ([path, key, value] for path, rep in reports for key, value in rep.scalar_items().items()),
        )

    mean = aggregate_reports([rep for _, rep in reports])
    report(style, "SELFSIM", f"{len(reports)} image(s), mean kl_12={mean['kl_12']:.5f}")
    emit_json(
        {
            "reports": [dict(to_plain(rep), path=path) for path, rep in reports],
            "mean": mean,
        }
    )
    return 0
