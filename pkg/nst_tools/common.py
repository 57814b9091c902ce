# common.py: Helpers shared by the subcommand plugins.
# Argument parsing that never exits the process, config loading with flag
# overrides, field loading by extension, and stdout/stderr reporting.

import argparse
import sys
from typing import Any, Optional

from colorama import Style

from field_io.field import GrayField
from field_io.image_io import read_image, read_raw
from run_config import RunConfig, load_run_config
from utils.reporting import dumps_json


class NstArgParser(argparse.ArgumentParser):
    """
    An ArgumentParser that raises SystemExit instead of calling sys.exit(),
    so `run()` can turn parse failures into exit code 1 and keep control.
    """

    def exit(self, status=0, message=None):
        if message:
            sys.stderr.write(message)
        raise SystemExit(status)

    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"Error: {message}\n")
        raise SystemExit(1)


def make_parser(prog: str, description: str) -> NstArgParser:
    parser = NstArgParser(prog=f"nst {prog}", description=description)
    parser.add_argument("--config", help="key=value run configuration file.")
    return parser


def load_config(parsed: argparse.Namespace, **overrides: Any) -> RunConfig:
    return load_run_config(parsed.config).with_overrides(**overrides)


def load_field(path: str) -> GrayField:
    """Raw float64 dumps end in .raw; anything else goes through the image reader."""
    if path.lower().endswith(".raw"):
        return read_raw(path)
    return read_image(path)


def emit_json(payload: Any):
    sys.stdout.write(dumps_json(payload))
    sys.stdout.flush()


def report(style: Optional[dict], label: str, message: str):
    """One status line on stderr, so stdout carries only results."""
    if style:
        sys.stderr.write(f"{style['status']}{label}:{Style.RESET_ALL} {message}\n")
    else:
        sys.stderr.write(f"{label}: {message}\n")
