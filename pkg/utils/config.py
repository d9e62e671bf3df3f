"""
Run configuration for the command-line tools.

A RunConfig captures every flag of every command, so a run persisted as
run_config.json replays with --config. Sources are layered:

- model defaults
- a JSON config file
- explicit command-line flags
- the SPARSE_VAR_THREADS environment override (thread count only)
"""

import hashlib
import os
from pathlib import Path
from typing import Any, Dict, List, Literal, Mapping, Optional, Union

from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from utils.errors import ConfigError

THREADS_ENV = "SPARSE_VAR_THREADS"

Command = Literal["infer", "simulate", "bench", "eval"]
RegimeName = Literal["lasso", "adaptive", "known", "inferred"]
CriterionName = Literal["bic", "aic"]

ALL_REGIMES: List[RegimeName] = ["lasso", "adaptive", "known", "inferred"]
ALL_CRITERIA: List[CriterionName] = ["bic", "aic"]


class _Model(BaseModel):
    model_config = ConfigDict(extra="forbid", validate_assignment=True)


class SimulationSettings(_Model):
    """Hub-graph and trajectory parameters."""

    p: int = Field(20, ge=1)
    n: int = Field(40, ge=1)
    replicates: int = Field(1, ge=1)
    # defaults to 2p
    edges: Optional[int] = Field(None, ge=0)
    hub_prob: float = Field(0.1, gt=0, lt=1)
    hub_to_leaf: float = Field(0.85, ge=0, le=1)
    sigma2: float = Field(0.1, gt=0)
    # redraw coefficients until the spectral radius is below 1
    stationary: bool = True


class BenchSetting(_Model):
    p: int = Field(..., ge=1)
    n: int = Field(..., ge=1)
    replicates: int = Field(100, ge=1)


def _default_bench_settings() -> List[BenchSetting]:
    return [BenchSetting(p=20, n=n, replicates=100) for n in (40, 20, 10)]


class BenchSettings(_Model):
    settings: List[BenchSetting] = Field(default_factory=_default_bench_settings)
    regimes: List[RegimeName] = Field(default_factory=lambda: list(ALL_REGIMES))
    criteria: List[CriterionName] = Field(default_factory=lambda: list(ALL_CRITERIA))
    irrepresentability: bool = True
    timing: bool = False
    timing_nodes: List[int] = Field(default_factory=lambda: list(range(5, 186, 20)))
    timing_points: int = Field(92, ge=1)

    @field_validator("settings", "regimes", "criteria", "timing_nodes")
    @classmethod
    def _non_empty(cls, value: list) -> list:
        if not value:
            raise ValueError("must not be empty")
        return value

    @field_validator("timing_nodes")
    @classmethod
    def _positive_nodes(cls, value: List[int]) -> List[int]:
        if any(p < 1 for p in value):
            raise ValueError("node counts must be positive")
        return value


class EvalSettings(_Model):
    estimate: Optional[str] = None
    truth: Optional[str] = None
    # data file or name list fixing the node universe
    nodes: Optional[str] = None
    off_diagonal: bool = False


class RunConfig(_Model):
    command: Command = "infer"
    input: Optional[str] = None
    output: str = "output"
    classes: Optional[str] = None
    individual: Optional[str] = None
    penalty: RegimeName = "lasso"
    ratio: float = Field(2.0, gt=1)
    normalize_classes: bool = True
    criterion: CriterionName = "bic"
    init_criterion: CriterionName = "bic"
    grid_size: int = Field(50, ge=2)
    terminal_ratio: float = Field(0.01, gt=0, lt=1)
    tol: float = Field(1e-10, gt=0)
    impute: bool = False
    seed: int = 0
    threads: Optional[int] = Field(None, ge=1)
    log_level: Literal["DEBUG", "INFO", "WARNING", "ERROR"] = "INFO"
    log_file: Optional[str] = None
    ledger: Optional[str] = None
    simulation: SimulationSettings = Field(default_factory=SimulationSettings)
    bench: BenchSettings = Field(default_factory=BenchSettings)
    eval: EvalSettings = Field(default_factory=EvalSettings)

    def to_json(self) -> str:
        return self.model_dump_json(indent=2) + "\n"

    def digest(self) -> str:
        return hashlib.sha256(self.model_dump_json().encode("utf-8")).hexdigest()


def _validation_message(exc: ValidationError) -> str:
    first = exc.errors()[0]
    location = ".".join(str(part) for part in first["loc"])
    return f"{location}: {first['msg']}" if location else first["msg"]


def load_run_config(path: Union[str, Path]) -> RunConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"Cannot read config file {path}: {exc}") from exc
    try:
        return RunConfig.model_validate_json(text)
    except ValidationError as exc:
        raise ConfigError(f"Invalid config file {path}: {_validation_message(exc)}") from exc


def _deep_merge(base: Dict[str, Any], overrides: Mapping[str, Any]) -> Dict[str, Any]:
    merged = dict(base)
    for key, value in overrides.items():
        if isinstance(value, Mapping) and isinstance(merged.get(key), dict):
            merged[key] = _deep_merge(merged[key], value)
        else:
            merged[key] = value
    return merged


def merge_overrides(config: RunConfig, overrides: Mapping[str, Any]) -> RunConfig:
    """Apply explicitly given values (nested mappings for sub-settings)."""
    try:
        return RunConfig.model_validate(_deep_merge(config.model_dump(), overrides))
    except ValidationError as exc:
        raise ConfigError(f"Invalid configuration: {_validation_message(exc)}") from exc


def apply_environment(config: RunConfig, environ: Optional[Mapping[str, str]] = None) -> RunConfig:
    """Override the thread count from SPARSE_VAR_THREADS when it is set."""
    environ = os.environ if environ is None else environ
    raw = environ.get(THREADS_ENV)
    if raw is None or not raw.strip():
        return config
    try:
        threads = int(raw)
    except ValueError as exc:
        raise ConfigError(f"{THREADS_ENV} must be an integer, got '{raw}'") from exc
    return merge_overrides(config, {"threads": threads})


def load_environment(env_file: Optional[Union[str, Path]] = None) -> bool:
    """Load a .env file into the process environment; True if one was found."""
    return bool(load_dotenv(env_file) if env_file is not None else load_dotenv())
