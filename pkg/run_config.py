# run_config.py: Validated run configuration.
# Composes every stage's parameter model with the run-level settings, and
# parses the plain `section.key = value` file format. Unknown sections and
# keys are rejected.

import json
import os
from typing import Any, Dict, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from classify.fusion_net import FusionConfig
from classify.svm import SvmConfig
from classify.two_view import TwoViewConfig
from config import HURST_MAX_LAG, PATCH_SIZE, PROTOCOL_REPETITIONS
from errors import InputError
from features.phase_congruency import PcConfig
from features.sth import SthConfig
from logger import logger
from rtv.decompose import RtvConfig


class FbmConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    method: Literal["auto", "exact", "spectral"] = Field(
        "auto", description="Synthesis method; auto picks exact for small grids."
    )
    sigma: float = Field(1.0, gt=0.0, description="Default sigma_H of synthesized fields.")


class RunConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    seed: int = Field(0, ge=0, description="Run seed; every stage seed is derived from it.")
    output_dir: str = Field(".", description="Directory for pipeline outputs.")
    patch_size: int = Field(PATCH_SIZE, ge=8, description="Side of the Hurst estimation patches.")
    max_lag: int = Field(HURST_MAX_LAG, ge=1, description="Largest variogram lag.")
    structural_mode: Literal["pc", "sth"] = Field("pc", description="Structural feature.")
    view: Literal["texture", "structure", "both"] = Field("both", description="Features to extract.")
    test_count: Optional[int] = Field(None, ge=1, description="Test-set size; None keeps the 40/240 share.")
    repetitions: int = Field(PROTOCOL_REPETITIONS, ge=1, description="Protocol repetitions.")
    workers: int = Field(1, ge=1, description="Worker processes for extraction and repetitions.")

    fbm: FbmConfig = Field(default_factory=FbmConfig)
    rtv: RtvConfig = Field(default_factory=RtvConfig)
    pc: PcConfig = Field(default_factory=PcConfig)
    sth: SthConfig = Field(default_factory=SthConfig)
    svm: SvmConfig = Field(default_factory=SvmConfig)
    nn: FusionConfig = Field(default_factory=FusionConfig)

    def two_view(self) -> TwoViewConfig:
        return TwoViewConfig(svm=self.svm, fusion=self.nn, test_count=self.test_count)

    def with_overrides(self, **overrides: Any) -> "RunConfig":
        """Applies CLI flags that were actually given (None values are ignored)."""
        top: Dict[str, Any] = {}
        sections: Dict[str, Dict[str, Any]] = {}
        for key, value in overrides.items():
            if value is None:
                continue
            if "." in key:
                section, name = key.split(".", 1)
                sections.setdefault(section, {})[name] = value
            else:
                top[key] = value
        payload = self.model_dump(by_alias=True)
        payload.update(top)
        for section, values in sections.items():
            payload[section].update(values)
        return _validate(payload, "command-line overrides")


def _parse_value(raw: str) -> Any:
    """JSON literals (numbers, true/false, null, lists) or a bare string."""
    try:
        return json.loads(raw)
    except json.JSONDecodeError:
        return raw


def _validate(payload: Dict[str, Any], origin: str) -> RunConfig:
    try:
        return RunConfig.model_validate(payload)
    except ValidationError as e:
        problems = "; ".join(
            f"{'.'.join(str(p) for p in err['loc'])}: {err['msg']}" for err in e.errors()
        )
        raise InputError(f"Invalid configuration in {origin}: {problems}") from e


def parse_run_config(text: str, origin: str = "<config>") -> RunConfig:
    payload: Dict[str, Any] = {}
    for line_no, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise InputError(f"{origin}:{line_no}: expected 'key = value', got '{line.strip()}'.")
        key, raw = (part.strip() for part in stripped.split("=", 1))
        if not key:
            raise InputError(f"{origin}:{line_no}: empty key.")
        value = _parse_value(raw)
        if "." in key:
            section, name = key.split(".", 1)
            target = payload.setdefault(section, {})
            if not isinstance(target, dict):
                raise InputError(f"{origin}:{line_no}: '{section}' is not a section.")
            target[name] = value
        else:
            payload[key] = value
    return _validate(payload, origin)


def load_run_config(path: Optional[str]) -> RunConfig:
    if path is None:
        return RunConfig()
    if not os.path.isfile(path):
        raise InputError(f"Config file not found: {path}")
    with open(path, "r", encoding="utf-8") as handle:
        config = parse_run_config(handle.read(), path)
    logger.info("CLI", "Run configuration loaded.", {"path": path, "config": config.model_dump(by_alias=True)})
    return config
