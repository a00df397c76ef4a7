"""Fuzz campaign configuration.

A campaign is described by a FuzzConfig, read from JSON (pydantic) or TOML
(tomlkit). `render_fuzz_config` writes a commented TOML template.
"""

from __future__ import annotations

from pathlib import Path

import tomlkit
from pydantic import BaseModel, Field, ValidationError, field_validator, model_validator
from tomlkit.exceptions import ParseError as TomlParseError

from .graph import GraphError
from .oracles import PROBLEM_KINDS
from .registry import Param
from .settings import load_settings


class ConfigError(GraphError):
    pass


class FuzzConfig(BaseModel):
    problem: str = Field(..., description="problem tag, e.g. vc, fvs, lc, hc")
    param: str = Field(..., description="vc | fvs | deg2 | td:<d>")
    seed: int = 0
    instances: int = Field(50, ge=1)
    attachments: int = Field(20, ge=0, description="random attachments per instance")
    max_n: int = Field(12, ge=1, description="max_n + max_fresh must fit under the oracle cap")
    max_boundary: int = Field(4, ge=0)
    max_k: int = Field(3, ge=0, description="modulator vertices outside the boundary")
    max_fresh: int = Field(6, ge=0, description="fresh vertices per attachment")
    densities: list[float] = Field(default_factory=lambda: [0.2, 0.5, 0.8])
    rest_density: float = Field(0.4, ge=0.0, le=1.0)
    cross_density: float = Field(0.4, ge=0.0, le=1.0)
    exhaustive_fresh: int = Field(
        2, ge=0, description="enumerate all attachments up to this many fresh vertices"
    )
    exhaustive_boundary: int = Field(2, ge=0, description="only for boundaries up to this size")

    @field_validator("problem")
    @classmethod
    def _known_problem(cls, v: str) -> str:
        if v not in PROBLEM_KINDS:
            raise ValueError(f"unknown problem {v!r}")
        return v

    @field_validator("param")
    @classmethod
    def _known_param(cls, v: str) -> str:
        Param.parse(v)
        return v

    @field_validator("densities")
    @classmethod
    def _unit_densities(cls, v: list[float]) -> list[float]:
        if not v or any(not 0.0 <= d <= 1.0 for d in v):
            raise ValueError("densities must be a nonempty list of values in [0, 1]")
        return v

    @model_validator(mode="after")
    def _within_oracle_cap(self) -> FuzzConfig:
        cap = load_settings().caps.general
        if self.max_n + self.max_fresh > cap:
            raise ValueError(
                f"max_n + max_fresh = {self.max_n + self.max_fresh} exceeds the oracle cap {cap}"
            )
        if self.max_boundary + self.max_k > self.max_n:
            raise ValueError("max_boundary + max_k must not exceed max_n")
        return self

    @property
    def parsed_param(self) -> Param:
        return Param.parse(self.param)


def load_fuzz_config(path: Path) -> FuzzConfig:
    text = path.read_text(encoding="utf-8")
    try:
        if path.suffix == ".toml":
            data = tomlkit.parse(text).unwrap()
            return FuzzConfig.model_validate(data)
        return FuzzConfig.model_validate_json(text)
    except (ValidationError, TomlParseError) as exc:
        raise ConfigError(f"{path}: {exc}") from exc


def render_fuzz_config(cfg: FuzzConfig) -> str:
    doc = tomlkit.document()
    doc.add(tomlkit.comment("bkernel fuzz campaign"))
    for name, value in cfg.model_dump().items():
        doc.add(name, value)
        info = FuzzConfig.model_fields[name].description
        if info:
            doc[name].comment(info)
    return tomlkit.dumps(doc)
