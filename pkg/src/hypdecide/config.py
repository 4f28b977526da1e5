"""Run configuration: every resource budget in one place.

A config file is JSON with any subset of the Budgets fields plus
"assume_irreducible", e.g. {"max_rounds": 50, "reject_batch": 32}.
"""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

from gmpy2 import mpq


@dataclass
class Budgets:
    groebner_steps: int = 20000
    grid_cap: int = 200000
    max_rounds: int = 100
    reject_batch: int = 16
    accept_batch: int = 16
    membership_budget: int = 20000
    # per-edge width of dihedral-angle intervals
    angle_eps: str = "1/1048576"

    @property
    def eps(self) -> mpq:
        return mpq(self.angle_eps)


@dataclass
class RunConfig:
    budgets: Budgets = field(default_factory=Budgets)
    # the manifold is asserted irreducible by the caller; verdicts depend on it
    assume_irreducible: bool = True

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        names = {f.name for f in fields(Budgets)}
        unknown = set(d) - names - {"assume_irreducible"}
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        b = Budgets(**{k: v for k, v in d.items() if k in names})
        return cls(b, bool(d.get("assume_irreducible", True)))

    @classmethod
    def load(cls, path) -> "RunConfig":
        return cls.from_dict(json.loads(Path(path).read_text()))

    def to_dict(self) -> dict:
        out = asdict(self.budgets)
        out["assume_irreducible"] = self.assume_irreducible
        return out
