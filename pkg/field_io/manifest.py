# manifest.py: Dataset manifest ingestion.
# A manifest is a UTF-8 CSV with columns path,label[,roi_x,roi_y,roi_w,roi_h].
# Labels are remapped densely to 0..k-1 in first-occurrence order.

import csv
import os
from collections import Counter
from dataclasses import dataclass, field
from typing import List, Optional

from errors import InputError
from field_io.field import Roi
from logger import logger

ROI_COLUMNS = ("roi_x", "roi_y", "roi_w", "roi_h")


@dataclass(frozen=True)
class ManifestEntry:
    path: str
    label: int
    roi: Optional[Roi] = None


@dataclass(frozen=True)
class DatasetManifest:
    entries: List[ManifestEntry]
    class_count: int
    label_names: List[str] = field(default_factory=list)

    def __post_init__(self):
        if self.class_count < 2:
            raise InputError("A dataset needs at least two classes.")
        counts = Counter(entry.label for entry in self.entries)
        for entry in self.entries:
            if not 0 <= entry.label < self.class_count:
                raise InputError(f"Label {entry.label} outside 0..{self.class_count - 1}.")
        for label in range(self.class_count):
            if counts[label] < 2:
                raise InputError(f"Class {label} has fewer than 2 examples.")

    @property
    def labels(self) -> List[int]:
        return [entry.label for entry in self.entries]


def _parse_roi(row: dict, line_no: int) -> Optional[Roi]:
    values = [(row.get(column) or "").strip() for column in ROI_COLUMNS]
    if not any(values):
        return None
    if not all(values):
        raise InputError(f"Manifest line {line_no}: ROI needs all of {', '.join(ROI_COLUMNS)}.")
    try:
        x, y, w, h = (int(v) for v in values)
    except ValueError as e:
        raise InputError(f"Manifest line {line_no}: ROI values must be integers.") from e
    return Roi(x, y, w, h)


def load_manifest(path: str) -> DatasetManifest:
    if not os.path.isfile(path):
        raise InputError(f"Manifest not found: {path}")
    base_dir = os.path.dirname(os.path.abspath(path))

    try:
        with open(path, "r", encoding="utf-8", newline="") as handle:
            reader = csv.DictReader(handle)
            if not reader.fieldnames or not {"path", "label"} <= set(reader.fieldnames):
                raise InputError("Manifest header must contain 'path' and 'label'.")
            rows = list(reader)
    except (UnicodeDecodeError, csv.Error) as e:
        raise InputError(f"Unreadable manifest {path}: {e}") from e

    label_ids = {}
    entries = []
    seen_paths = set()
    for line_no, row in enumerate(rows, start=2):
        raw_path = (row.get("path") or "").strip()
        raw_label = (row.get("label") or "").strip()
        if not raw_path or not raw_label:
            raise InputError(f"Manifest line {line_no}: missing path or label.")

        resolved = raw_path if os.path.isabs(raw_path) else os.path.join(base_dir, raw_path)
        resolved = os.path.normpath(resolved)
        if resolved in seen_paths:
            raise InputError(f"Manifest line {line_no}: duplicate path '{raw_path}'.")
        seen_paths.add(resolved)

        label = label_ids.setdefault(raw_label, len(label_ids))
        entries.append(ManifestEntry(resolved, label, _parse_roi(row, line_no)))

    manifest = DatasetManifest(
        entries=entries, class_count=len(label_ids), label_names=list(label_ids)
    )
    logger.info(
        "FieldIO",
        "Manifest loaded.",
        {"path": path, "entries": len(entries), "classes": manifest.label_names},
    )
    return manifest
