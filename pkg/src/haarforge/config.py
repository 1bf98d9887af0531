"""Experiment configuration and report records."""
from __future__ import annotations

import json
import time
from dataclasses import asdict, dataclass
from dataclasses import field as dc_field
from typing import Any

import numpy as np

from .delta import DeltaParameter

ACCEPTANCE_SEEDS = (1, 2, 3)


@dataclass
class ExperimentConfig:
    experiment: str
    n: int | None = None
    delta: tuple[float, float] | None = None
    theta: float | None = None
    field: str | None = None
    group: str | None = None
    samples: int | None = None
    seed: int = 1
    check: str | None = None
    nmax: int | None = None
    tolerances: dict[str, float] = dc_field(default_factory=dict)
    out: str | None = None
    format: str = "json"
    deterministic: bool = False
    shards: int = 1

    def __post_init__(self):
        if self.samples is not None and self.samples < 1:
            raise ValueError("samples must be >= 1")
        if self.n is not None and self.n < 1:
            raise ValueError("n must be >= 1")
        if self.delta is not None:
            d = DeltaParameter.coerce(tuple(self.delta))
            self.delta = (d.a, d.b)
        if self.theta is not None and self.theta <= 0:
            raise ValueError("theta must be positive")
        if self.format not in {"json", "csv"}:
            raise ValueError("format must be json or csv")
        if self.shards < 1:
            raise ValueError("shards must be >= 1")

    def tol(self, name: str, default: float) -> float:
        return float(self.tolerances.get(name, default))

    def echo(self) -> dict:
        d = asdict(self)
        d.pop("out")
        return d


@dataclass
class Check:
    name: str
    value: Any
    tolerance: Any
    passed: bool

    def to_dict(self) -> dict:
        return {"name": self.name, "value": _plain(self.value), "tolerance": _plain(self.tolerance),
                "passed": bool(self.passed)}


@dataclass
class ExperimentReport:
    experiment: str
    inputs: dict
    statistics: dict = dc_field(default_factory=dict)
    checks: list[Check] = dc_field(default_factory=list)
    tables: dict[str, list[dict]] = dc_field(default_factory=dict)
    wall_time: float = 0.0
    started: float = dc_field(default_factory=time.time)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def check(self, name: str, value, tolerance, passed: bool | None = None) -> Check:
        """Record a comparison; by default passes when value <= tolerance."""
        if passed is None:
            passed = bool(np.all(np.asarray(value) <= tolerance))
        c = Check(name, value, tolerance, bool(passed))
        self.checks.append(c)
        return c

    def to_dict(self, deterministic: bool = False) -> dict:
        out = {
            "experiment": self.experiment,
            "inputs": _plain(self.inputs),
            "statistics": _plain(self.statistics),
            "checks": [c.to_dict() for c in self.checks],
            "passed": self.passed,
        }
        if not deterministic:
            out["wall_time"] = self.wall_time
            out["started"] = self.started
        return out

    def to_json(self, deterministic: bool = False) -> str:
        return json.dumps(self.to_dict(deterministic), indent=2, sort_keys=True)

    def summary_lines(self) -> list[str]:
        return [f"{'PASS' if c.passed else 'FAIL'} {self.experiment}:{c.name} value={_fmt(c.value)} tol={_fmt(c.tolerance)}"
                for c in self.checks]


def _fmt(v) -> str:
    if isinstance(v, float):
        return f"{v:.3g}"
    return str(_plain(v))


def _plain(v):
    if isinstance(v, dict):
        return {str(k): _plain(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    if isinstance(v, np.ndarray):
        return _plain(v.tolist())
    if isinstance(v, (np.floating,)):
        return float(v)
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (np.bool_,)):
        return bool(v)
    if isinstance(v, complex):
        return [v.real, v.imag]
    return v
