"""Strict JSON scenario configuration for batch runs."""

import json
from typing import List, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from . import reversed_periscope as rp
from . import spherical_periscope as sp
from .fields import FAMILIES, make_field


class ConfigError(Exception):
    """Unreadable or invalid configuration; ``str()`` carries a line/column hint."""


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid", allow_inf_nan=False)


class MirrorConfig(_Strict):
    family: Literal["constant", "affine", "quadratic", "gaussian-bump", "sum-of-bumps"]
    params: dict = Field(default_factory=dict)
    gradient_mode: Literal["analytic", "finite-difference"] = "analytic"
    fd_step: float = Field(default=1e-6, gt=0)


class PatchConfig(_Strict):
    center: List[float]
    radius: float = Field(gt=0, lt=1.5707963267948966)


class DomainConfig(_Strict):
    lower: List[float]
    upper: List[float]


class Tolerances(_Strict):
    trace: float = Field(default=1e-9, gt=0)
    synthesize: float = Field(default=1e-10, gt=0)
    frobenius: float = Field(default=1e-5, gt=0)


class OutputConfig(_Strict):
    path: str = "."
    name: str = "report"
    format: Literal["csv+json", "json"] = "csv+json"


class ScenarioConfig(_Strict):
    scenario: Literal["spherical", "reversed"]
    dimension: int = Field(ge=2)
    C: float
    mirror: MirrorConfig
    patch: Optional[PatchConfig] = None
    domain: Optional[DomainConfig] = None
    grid: Union[int, List[int]]
    checks: List[Literal["synthesize", "trace", "frobenius"]] = Field(default_factory=lambda: ["trace"])
    tolerances: Tolerances = Field(default_factory=Tolerances)
    frobenius_step: float = Field(default=1e-4, gt=0)
    validation_grid: int = Field(default=33, ge=1, le=10_000)
    output: OutputConfig = Field(default_factory=OutputConfig)

    @model_validator(mode="after")
    def _consistent(self):
        n = self.dimension
        counts = self.grid_counts
        if len(counts) != n - 1:
            raise ValueError(f"grid needs {n - 1} per-axis counts, got {len(counts)}")
        if any(not 1 <= c <= 10_000 for c in counts):
            raise ValueError("grid counts must lie in [1, 10000]")
        if self.scenario == "spherical":
            if self.patch is None or self.domain is not None:
                raise ValueError("a spherical scenario takes 'patch' and no 'domain'")
            if len(self.patch.center) != n:
                raise ValueError(f"patch.center must have {n} components")
        else:
            if self.domain is None or self.patch is not None:
                raise ValueError("a reversed scenario takes 'domain' and no 'patch'")
            if len(self.domain.lower) != n - 1 or len(self.domain.upper) != n - 1:
                raise ValueError(f"domain bounds must have {n - 1} components")
        if "frobenius" in self.checks and n != 4:
            raise ValueError("the frobenius check needs dimension 4 (three-dimensional fronts)")
        if len(set(self.checks)) != len(self.checks):
            raise ValueError("checks must not repeat")
        return self

    @property
    def grid_counts(self):
        if isinstance(self.grid, int):
            return [self.grid] * (self.dimension - 1)
        return list(self.grid)

    def echo(self):
        return self.model_dump(mode="json")


def _locate(text, loc):
    """Best-effort line/column of the last key in a pydantic error location."""
    keys = [k for k in loc if isinstance(k, str)]
    for key in reversed(keys):
        pos = text.find(json.dumps(key))
        if pos >= 0:
            line = text.count("\n", 0, pos) + 1
            col = pos - (text.rfind("\n", 0, pos) + 1) + 1
            return line, col
    return 1, 1


def _reject_constant(name):
    raise ValueError(f"non-finite number {name} is not allowed")


def parse_config(text):
    try:
        raw = json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    except ValueError as exc:
        name = str(exc).split()[2]
        pos = text.find(name)
        line = text.count("\n", 0, pos) + 1
        col = pos - (text.rfind("\n", 0, pos) + 1) + 1
        raise ConfigError(f"line {line}, column {col}: {exc}") from exc
    try:
        return ScenarioConfig.model_validate(raw)
    except ValidationError as exc:
        err = exc.errors()[0]
        line, col = _locate(text, err["loc"])
        where = ".".join(str(k) for k in err["loc"]) or "<root>"
        raise ConfigError(f"line {line}, column {col}: {where}: {err['msg']}") from exc


def load_config(path):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    return parse_config(text)


def build_field(mirror):
    if mirror.family not in FAMILIES:
        raise ConfigError(f"unknown mirror family {mirror.family!r}")
    fd_step = mirror.fd_step if mirror.gradient_mode == "finite-difference" else None
    try:
        return make_field(mirror.family, mirror.params, fd_step=fd_step)
    except TypeError as exc:
        raise ConfigError(f"mirror.params: {exc}") from exc


def build_spec(cfg):
    """Periscope spec for a config.  Infeasible mirrors raise ``InfeasibleError``."""
    f = build_field(cfg.mirror)
    try:
        if cfg.scenario == "spherical":
            return sp.SphericalPeriscopeSpec(
                f, cfg.C, tuple(cfg.patch.center), cfg.patch.radius, validation_grid=cfg.validation_grid
            )
        return rp.ReversedPeriscopeSpec(
            f, cfg.C, tuple(cfg.domain.lower), tuple(cfg.domain.upper), validation_grid=cfg.validation_grid
        )
    except ValueError as exc:
        # shape mismatches between mirror params and the dimension surface here
        raise ConfigError(f"mirror/geometry mismatch: {exc}") from exc
