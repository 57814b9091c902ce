# cmd_features.py: The 'features' subcommand.

from field_io.manifest import load_manifest
from features.dataset import extract_dataset_features, write_features_csv
from nst_tools.common import load_config, make_parser, report


def register():
    return {
        "features": {
            "func": cmd_features,
            "alias": [],
            "help": "Extract two-view features for every image of a manifest.",
        }
    }


def extract_from_config(manifest, config):
    return extract_dataset_features(
        manifest,
        view=config.view,
        structural_mode=config.structural_mode,
        patch_size=config.patch_size,
        max_lag=config.max_lag,
        rtv_config=config.rtv,
        pc_config=config.pc,
        sth_config=config.sth,
        workers=config.workers,
    )


def cmd_features(args, style):
    parser = make_parser("features", "Two-view feature extraction over a dataset manifest.")
    parser.add_argument("--manifest", required=True, help="CSV with path,label[,roi_x,roi_y,roi_w,roi_h].")
    parser.add_argument("--view", choices=["texture", "structure", "both"], help="Views to extract.")
    parser.add_argument("--structural-mode", choices=["pc", "sth"], help="Structural feature.")
    parser.add_argument("--patch-size", type=int, help="Hurst patch side (default 32).")
    parser.add_argument("--workers", type=int, help="Worker processes.")
    parser.add_argument("--out", required=True, help="Output features CSV.")
    parsed = parser.parse_args(args)

    config = load_config(
        parsed,
        view=parsed.view,
        structural_mode=parsed.structural_mode,
        patch_size=parsed.patch_size,
        workers=parsed.workers,
    )
    manifest = load_manifest(parsed.manifest)
    rows = extract_from_config(manifest, config)
    write_features_csv(parsed.out, rows)
    report(style, "FEATURES", f"{len(rows)} rows ({config.view}, {config.structural_mode}) -> {parsed.out}")
    return 0
