# cmd_fbm.py: The 'synth' and 'estimate-hurst' subcommands.
# Synthesized fields are rescaled to [0,1] before being written as 8-bit
# images (the variogram slope is unaffected); --out-raw keeps exact values.

from config import EXACT_SYNTH_MAX_SIDE
from errors import InputError
from fbm.estimation import estimate_hurst
from fbm.model import FbmParams
from fbm.synthesis import synth_fbm_exact, synth_fbm_spectral
from field_io.field import GrayField
from field_io.image_io import write_image, write_raw
from nst_tools.common import emit_json, load_config, load_field, make_parser, report
from utils.seeding import derive_seed


def register():
    return {
        "synth": {
            "func": cmd_synth,
            "alias": [],
            "help": "Synthesize a 2D fBm field and write it as an image.",
        },
        "estimate-hurst": {
            "func": cmd_estimate_hurst,
            "alias": ["hurst"],
            "help": "Estimate the Hurst exponent of an image by variogram regression.",
        },
    }


def _rescaled(field: GrayField) -> GrayField:
    low, high = float(field.data.min()), float(field.data.max())
    if high == low:
        return GrayField(field.data * 0.0)
    return GrayField((field.data - low) / (high - low))


def cmd_synth(args, style):
    parser = make_parser("synth", "Synthesize fractional Brownian motion on an n x n grid.")
    parser.add_argument("--hurst", type=float, required=True, help="Hurst exponent in (0,1).")
    scale = parser.add_mutually_exclusive_group()
    scale.add_argument("--sigma", type=float, help="sigma_H of the field.")
    scale.add_argument("--sigma-w", type=float, help="White-noise sigma_w, converted to sigma_H.")
    parser.add_argument("--size", type=int, required=True, help="Grid side in pixels.")
    parser.add_argument("--seed", type=int, help="Run seed (default from config).")
    parser.add_argument("--method", choices=["auto", "exact", "spectral"], help="Synthesis method.")
    parser.add_argument("--out", required=True, help="Output image (8-bit PGM).")
    parser.add_argument("--out-raw", help="Optional float64 dump of the unscaled field.")
    parsed = parser.parse_args(args)

    config = load_config(parsed, seed=parsed.seed, **{"fbm.method": parsed.method, "fbm.sigma": parsed.sigma})
    if parsed.sigma_w is not None:
        params = FbmParams.from_sigma_w(parsed.hurst, parsed.sigma_w)
    else:
        params = FbmParams(parsed.hurst, config.fbm.sigma)

    method = config.fbm.method
    if method == "auto":
        method = "exact" if parsed.size <= EXACT_SYNTH_MAX_SIDE else "spectral"
    seed = derive_seed(config.seed, "synth")
    if method == "exact":
        field = synth_fbm_exact(params, parsed.size, seed)
    elif method == "spectral":
        field = synth_fbm_spectral(params, parsed.size, seed)
    else:
        raise InputError(f"Unknown synthesis method '{method}'.")

    write_image(_rescaled(field), parsed.out)
    if parsed.out_raw:
        write_raw(field, parsed.out_raw)
    report(style, "SYNTH", f"{method} fBm H={params.hurst} n={parsed.size} -> {parsed.out}")
    emit_json(
        {
            "out": parsed.out,
            "method": method,
            "hurst": params.hurst,
            "sigma_h": params.sigma_h,
            "size": parsed.size,
            "seed": config.seed,
            "min": float(field.data.min()),
            "max": float(field.data.max()),
        }
    )
    return 0


def cmd_estimate_hurst(args, style):
    parser = make_parser("estimate-hurst", "Variogram-regression Hurst estimate of one field.")
    parser.add_argument("--in", dest="input", required=True, help="Image (PGM/PNG) or .raw dump.")
    parser.add_argument("--max-lag", type=int, help="Largest lag (default 8).")
    parsed = parser.parse_args(args)

    config = load_config(parsed, max_lag=parsed.max_lag)
    estimate = estimate_hurst(load_field(parsed.input), config.max_lag)
    report(style, "HURST", f"{parsed.input}: h_hat={estimate.h_hat:.4f} (r^2={estimate.r_squared:.4f})")
    emit_json(estimate.summary())
    return 0
