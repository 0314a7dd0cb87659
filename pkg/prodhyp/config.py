"""
Module implements run configs: the flat key-value document format and its validation

A document looks like

    # unit sphere, n = 4
    epsilon = 1
    n = 4
    base.kind = geodesic_sphere
    base.r = 0.5236
    profile.family = linear
    profile.alpha = 1
    s_range = 0, 0.5, 11
"""

from __future__ import annotations

import itertools
from typing import Any, Literal

import numpy as np
import pydantic

from . import log_utils
from .ambient import DEFAULT_TOL, SpaceForm
from .base_catalog import BaseKind, IsoparametricBase, make_base
from .errors import ConfigError, GeometryError
from .hypersurface import Profile, ProfileFamily, make_profile


class BaseSpec(pydantic.BaseModel):
    model_config = pydantic.ConfigDict(extra="forbid")

    kind: BaseKind
    r: float|None = None
    p: int|None = None
    q: int|None = None
    orientation: int = 1


class ProfileSpec(pydantic.BaseModel):
    model_config = pydantic.ConfigDict(extra="forbid")

    family: ProfileFamily
    path: str|None = None
    params: dict[str, float] = {}

    @pydantic.model_validator(mode="after")
    def _check_source(self) -> ProfileSpec:
        if self.family is ProfileFamily.SAMPLED and self.path is None:
            raise ValueError("sampled profiles require profile.path")

        if self.family is ProfileFamily.ROTATION:
            raise ValueError("rotation profiles are built by the 'rotation' subcommand")

        return self


class RunConfig(pydantic.BaseModel):
    """
    Everything a report or sweep run needs
    """
    model_config = pydantic.ConfigDict(extra="forbid")

    epsilon: int
    n: int
    base: BaseSpec
    profile: ProfileSpec
    s_range: tuple[float, float, int]
    tol: float = DEFAULT_TOL
    out_format: Literal["csv", "json"] = "csv"
    out_path: str|None = None
    jobs: int = 1

    @pydantic.field_validator("epsilon")
    @classmethod
    def _check_epsilon(cls, value: int) -> int:
        if value not in (1, -1):
            raise ValueError("epsilon must be ±1")
        return value

    @pydantic.field_validator("n")
    @classmethod
    def _check_n(cls, value: int) -> int:
        if value < 2:
            raise ValueError(f"n must be >= 2, got {value}")
        return value

    @pydantic.field_validator("s_range")
    @classmethod
    def _check_s_range(cls, value: tuple[float, float, int]) -> tuple[float, float, int]:
        start, stop, count = value
        if count < 1:
            raise ValueError(f"count must be >= 1, got {count}")

        if count > 1 and not start < stop:
            raise ValueError(f"start must be < stop, got {start} and {stop}")

        return value

    @pydantic.field_validator("tol")
    @classmethod
    def _check_tol(cls, value: float) -> float:
        if value <= 0:
            raise ValueError(f"tol must be > 0, got {value}")
        return value

    @pydantic.field_validator("jobs")
    @classmethod
    def _check_jobs(cls, value: int) -> int:
        if value < 1:
            raise ValueError(f"jobs must be >= 1, got {value}")
        return value

    def space_form(self) -> SpaceForm:
        return SpaceForm.create(self.epsilon, self.n)

    def grid(self) -> list[float]:
        start, stop, count = self.s_range
        if count == 1:
            return [float(start)]
        return np.linspace(start, stop, count).tolist()

    def profile_domain(self) -> tuple[float, float]:
        start, stop, count = self.s_range
        if count == 1:
            return (start - 0.5, start + 0.5)
        return (start, stop)

    def build_base(self) -> IsoparametricBase:
        spec = self.base
        return make_base(
            self.space_form(),
            spec.kind,
            r=spec.r,
            p=spec.p,
            q=spec.q,
            orientation=spec.orientation,
            tol=self.tol
        )

    def build_profile(self) -> Profile:
        spec = self.profile
        if spec.family is ProfileFamily.SAMPLED:
            assert spec.path is not None
            return Profile.from_csv(spec.path)

        return make_profile(spec.family, self.profile_domain(), **spec.params)


def parse_document(text: str) -> list[tuple[int, str, str]]:
    """
    Splits a config document into (line number, key, raw value) entries
    """
    rv = []
    seen: dict[str, int] = {}
    for line_no, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue

        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key:
            raise ConfigError(f"expected 'key = value', got '{raw_line.strip()}'", line=line_no)

        if not value:
            raise ConfigError(f"missing value for '{key}'", line=line_no)

        if key.count(".") > 1 or key.startswith(".") or key.endswith("."):
            raise ConfigError(f"malformed key '{key}'", line=line_no)

        if key in seen:
            raise ConfigError(f"duplicate key '{key}', first set on line {seen[key]}", line=line_no)

        seen[key] = line_no
        rv.append((line_no, key, value))

    return rv

def _split_list(value: str) -> list[str]:
    return [v.strip() for v in value.strip("()[] ").split(",")]

def _nest(entries: list[tuple[int, str, str]]) -> dict[str, Any]:
    data: dict[str, Any] = {}
    for line_no, key, value in entries:
        if key == "s_range":
            data[key] = _split_list(value)
            continue

        section, dot, name = key.partition(".")
        if not dot:
            data[key] = value
            continue

        if section not in ("base", "profile"):
            raise ConfigError(f"unknown section '{section}'", line=line_no)

        target = data.setdefault(section, {})
        if section == "profile" and name not in ("family", "path"):
            target = target.setdefault("params", {})
        target[name] = value

    return data

def _field_name(error: dict) -> str:
    loc = [str(part) for part in error["loc"] if part != "params"]
    return ".".join(loc) or "config"

def _validate(data: dict[str, Any]) -> RunConfig:
    try:
        cfg = RunConfig.model_validate(data)

    except pydantic.ValidationError as e:
        error = e.errors()[0]
        raise ConfigError(
            error["msg"].removeprefix("Value error, "),
            field=_field_name(error)
        ) from e

    # Pairing rules and parameter ranges live in the catalogs
    for field, build in (("base", cfg.build_base), ("profile", cfg.build_profile)):
        try:
            build()

        except (GeometryError, OSError) as e:
            raise ConfigError(str(e), field=field) from e

    return cfg

def parse_config(text: str, **overrides: Any) -> RunConfig:
    """
    Parses and validates a config document, overrides take priority over the document
    """
    data = _nest(parse_document(text))
    data.update({k: v for k, v in overrides.items() if v is not None})
    cfg = _validate(data)
    log_utils.logger.debug(f"Parsed config: {cfg!r}")
    return cfg

def parse_sweep(text: str, **overrides: Any) -> list[RunConfig]:
    """
    Parses a sweep document: comma-separated base.* and profile.* values
    are expanded into their cartesian product, in document order
    """
    entries = parse_document(text)
    axes = []
    for line_no, key, value in entries:
        section = key.partition(".")[0]
        if section in ("base", "profile") and key != "profile.path":
            axes.append([(line_no, key, v) for v in _split_list(value)])
        else:
            axes.append([(line_no, key, value)])

    rv = []
    for combo in itertools.product(*axes):
        data = _nest(list(combo))
        data.update({k: v for k, v in overrides.items() if v is not None})
        rv.append(_validate(data))

    log_utils.logger.info(f"Sweep expanded into {len(rv)} configurations")
    return rv
