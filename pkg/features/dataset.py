# dataset.py: Two-view feature extraction over a dataset manifest.
# Each entry is read, cropped to its ROI, split into structure and texture
# layers, and reduced to a textural vector and a structural vector. Rows
# are independent, so extraction can fan out over worker processes.

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import partial
from typing import List, Optional, Sequence

import numpy as np

from config import FEATURE_VIEWS, HURST_MAX_LAG, PATCH_SIZE, STRUCTURAL_MODES
from errors import InputError
from features.phase_congruency import PcConfig, structural_feature_pc
from features.sth import SthConfig, sth_area
from features.textural import textural_features
from field_io.field import crop
from field_io.image_io import read_image
from field_io.manifest import DatasetManifest, ManifestEntry
from logger import logger
from rtv.decompose import RtvConfig, rtv_decompose
from utils.reporting import read_csv_dicts, write_csv


@dataclass(frozen=True, eq=False)
class TwoViewFeatures:
    path: str
    phi_t: np.ndarray
    phi_s: np.ndarray
    label: int

    def __post_init__(self):
        phi_t = np.asarray(self.phi_t, dtype=np.float64).ravel()
        phi_s = np.asarray(self.phi_s, dtype=np.float64).ravel()
        if not (np.all(np.isfinite(phi_t)) and np.all(np.isfinite(phi_s))):
            raise InputError(f"Non-finite features for {self.path}.")
        if phi_t.size and not 0.0 < phi_t[0] < 1.0:
            raise InputError(f"Mean Hurst estimate {phi_t[0]} outside (0,1) for {self.path}.")
        if np.any(phi_s < 0.0):
            raise InputError(f"Negative structural feature for {self.path}.")
        if self.label < 0:
            raise InputError(f"Negative label for {self.path}.")
        object.__setattr__(self, "phi_t", phi_t)
        object.__setattr__(self, "phi_s", phi_s)


def _check_modes(view: str, structural_mode: str):
    if view not in FEATURE_VIEWS:
        raise InputError(f"Unknown view '{view}'; use one of {FEATURE_VIEWS}.")
    if structural_mode not in STRUCTURAL_MODES:
        raise InputError(f"Unknown structural mode '{structural_mode}'; use one of {STRUCTURAL_MODES}.")


def entry_features(
    entry: ManifestEntry,
    view: str = "both",
    structural_mode: str = "pc",
    patch_size: int = PATCH_SIZE,
    max_lag: int = HURST_MAX_LAG,
    rtv_config: RtvConfig = RtvConfig(),
    pc_config: PcConfig = PcConfig(),
    sth_config: SthConfig = SthConfig(),
) -> TwoViewFeatures:
    _check_modes(view, structural_mode)
    image = crop(read_image(entry.path), entry.roi)
    structure, texture = rtv_decompose(image, rtv_config)

    phi_t = textural_features(texture, patch_size, max_lag) if view != "structure" else np.empty(0)
    if view == "texture":
        phi_s = np.empty(0)
    elif structural_mode == "pc":
        phi_s = structural_feature_pc(structure, pc_config)
    else:
        phi_s = np.array([sth_area(structure, sth_config) / (structure.width * structure.height)])
    return TwoViewFeatures(entry.path, phi_t, phi_s, entry.label)


def extract_dataset_features(
    manifest: DatasetManifest,
    view: str = "both",
    structural_mode: str = "pc",
    patch_size: int = PATCH_SIZE,
    max_lag: int = HURST_MAX_LAG,
    rtv_config: RtvConfig = RtvConfig(),
    pc_config: PcConfig = PcConfig(),
    sth_config: SthConfig = SthConfig(),
    workers: int = 1,
) -> List[TwoViewFeatures]:
    _check_modes(view, structural_mode)
    job = partial(
        entry_features,
        view=view,
        structural_mode=structural_mode,
        patch_size=patch_size,
        max_lag=max_lag,
        rtv_config=rtv_config,
        pc_config=pc_config,
        sth_config=sth_config,
    )
    logger.info(
        "Features",
        "Extracting dataset features.",
        {"entries": len(manifest.entries), "view": view, "mode": structural_mode, "workers": workers},
    )
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(job, manifest.entries))
    return [job(entry) for entry in manifest.entries]


def write_features_csv(path: str, rows: Sequence[TwoViewFeatures]):
    if not rows:
        raise InputError("No feature rows to write.")
    t_dim, s_dim = rows[0].phi_t.size, rows[0].phi_s.size
    if any(r.phi_t.size != t_dim or r.phi_s.size != s_dim for r in rows):
        raise InputError("Feature rows have inconsistent dimensions.")
    header = (
        ["path", "label"]
        + [f"phi_t_{i}" for i in range(t_dim)]
        + [f"phi_s_{i}" for i in range(s_dim)]
    )
    write_csv(path, header, ([r.path, r.label, *r.phi_t, *r.phi_s] for r in rows))


def _indexed_columns(fieldnames: Sequence[str], prefix: str) -> List[str]:
    columns = sorted(
        (name for name in fieldnames if name.startswith(prefix)),
        key=lambda name: int(name[len(prefix):]),
    )
    if [int(name[len(prefix):]) for name in columns] != list(range(len(columns))):
        raise InputError(f"Feature columns {prefix}* are not numbered 0..n-1.")
    return columns


def read_features_csv(path: str) -> List[TwoViewFeatures]:
    try:
        records = read_csv_dicts(path)
    except FileNotFoundError as e:
        raise InputError(f"Features file not found: {path}") from e
    if not records:
        raise InputError(f"Features file {path} has no rows.")

    fieldnames = list(records[0].keys())
    if not {"path", "label"} <= set(fieldnames):
        raise InputError("Features header must contain 'path' and 'label'.")
    try:
        t_columns = _indexed_columns(fieldnames, "phi_t_")
        s_columns = _indexed_columns(fieldnames, "phi_s_")
    except ValueError as e:
        raise InputError(f"Malformed feature column name in {path}.") from e

    rows = []
    for line_no, record in enumerate(records, start=2):
        try:
            phi_t = [float(record[c]) for c in t_columns]
            phi_s = [float(record[c]) for c in s_columns]
            label = int(record["label"])
        except (TypeError, ValueError) as e:
            raise InputError(f"{path} line {line_no}: unparseable value.") from e
        if any(math.isnan(v) for v in phi_t + phi_s):
            raise InputError(f"{path} line {line_no}: NaN feature.")
        rows.append(TwoViewFeatures(record["path"], np.array(phi_t), np.array(phi_s), label))
    return rows


def feature_matrix(rows: Sequence[TwoViewFeatures], view: str) -> np.ndarray:
    """Stacks phi_t, phi_s, or their concatenation ("both") into an (n, d) array."""
    if view == "texture":
        return np.array([r.phi_t for r in rows])
    if view == "structure":
        return np.array([r.phi_s for r in rows])
    if view == "both":
        return np.array([np.concatenate([r.phi_t, r.phi_s]) for r in rows])
    raise InputError(f"Unknown view '{view}'; use one of {FEATURE_VIEWS}.")


def class_count_of(rows: Sequence[TwoViewFeatures], k: Optional[int] = None) -> int:
    observed = max(r.label for r in rows) + 1
    if k is None:
        return observed
    if k < observed:
        raise InputError(f"k={k} but labels go up to {observed - 1}.")
    return k
