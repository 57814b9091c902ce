# reporting.py: Helpers for turning result objects into JSON and CSV output.
# JSON keys are sorted and floats pass through repr, so identical results
# always serialize to identical bytes.

import csv
import io
import json
from dataclasses import asdict, is_dataclass
from typing import Any, Dict, Iterable, List, Sequence

import numpy as np

from utils.atomic import write_text_atomic


def to_plain(value: Any) -> Any:
    """Recursively converts dataclasses and numpy values into JSON-ready data."""
    if is_dataclass(value) and not isinstance(value, type):
        return to_plain(asdict(value))
    if isinstance(value, dict):
        return {str(key): to_plain(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_plain(item) for item in value]
    if isinstance(value, np.ndarray):
        return to_plain(value.tolist())
    if isinstance(value, np.generic):
        return value.item()
    return value


def dumps_json(payload: Any) -> str:
    return json.dumps(to_plain(payload), indent=2, sort_keys=True) + "\n"


def write_json(path: str, payload: Any):
    write_text_atomic(path, dumps_json(payload))


def render_csv(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_cell(value) for value in row])
    return buffer.getvalue()


def write_csv(path: str, header: Sequence[str], rows: Iterable[Sequence[Any]]):
    write_text_atomic(path, render_csv(header, rows))


def read_csv_dicts(path: str) -> List[Dict[str, str]]:
    with open(path, "r", encoding="utf-8", newline="") as handle:
        return list(csv.DictReader(handle))


def _cell(value: Any) -> str:
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, np.integer):
        return str(int(value))
    return str(value)
