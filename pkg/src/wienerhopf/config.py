"""Run configuration: coefficient system, truncation windows, seed and tolerances.

A config file is a JSON document::

    {
      "n": 2,
      "pair": "free",
      "algebra": {"block_dims": [1, 1, 2], "unital": true,
                  "generators": [<dim x dim matrix of [re, im] pairs>, ...]},
      "L": 6, "L_eq": 8, "seed": 0,
      "tolerances": {"relation": 1e-10, ...},
      "kk": {"L": 6, "L_inner": 4, "t_samples": 5}
    }

When ``generators`` is omitted the built-in default system for ``n`` is used.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional

from .coeff_algebra import Action, AlgebraDescriptor, Endomorphism, unitise
from .presets import default_action
from .qlattice_core import FreeAbelianGroup, FreeGroup

__all__ = ["ConfigError", "RunConfig", "DEFAULT_TOLERANCES", "load_config"]

DEFAULT_TOLERANCES = {
    "exact": 0.0,
    "relation": 1e-10,
    "norm": 1e-8,
    "induced": 1e-12,
    "kk": 1e-12,
    "rank": 1e-10,
}


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    n: int = 2
    pair_kind: str = "free"
    block_dims: tuple = (1, 1, 2)
    unital: bool = True
    generators: Optional[list] = None
    L: int = 6
    L_eq: int = 8
    seed: int = 0
    tolerances: dict = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))
    kk_L: int = 6
    kk_L_inner: int = 4
    t_samples: int = 5

    def __post_init__(self):
        for name in ("n", "L", "L_eq", "kk_L", "kk_L_inner", "t_samples"):
            if int(getattr(self, name)) < 1:
                raise ConfigError(f"{name} must be positive")
        if self.pair_kind not in ("free", "abelian"):
            raise ConfigError(f"unknown pair kind {self.pair_kind!r}")
        if self.kk_L_inner > self.kk_L:
            raise ConfigError("kk inner window must not exceed the outer window")
        if self.seed < 0:
            raise ConfigError("seed must be nonnegative")
        for k, v in self.tolerances.items():
            if float(v) < 0:
                raise ConfigError(f"tolerance {k} must be nonnegative")

    def tol(self, name: str) -> float:
        return float(self.tolerances.get(name, DEFAULT_TOLERANCES[name]))

    @property
    def pair(self):
        return FreeGroup(self.n) if self.pair_kind == "free" else FreeAbelianGroup(self.n)

    def raw_action(self) -> Action:
        """The configured action, with every generator verified."""
        if self.generators is None:
            if self.pair_kind != "free" or tuple(self.block_dims) != (1, 1, 2):
                raise ConfigError("generator matrices are required unless the default system is used")
            return default_action(self.n)
        desc = AlgebraDescriptor(tuple(self.block_dims))
        if len(self.generators) != self.n:
            raise ConfigError(f"expected {self.n} generator matrices, got {len(self.generators)}")
        try:
            gens = [Endomorphism.from_record(desc, g, unital=self.unital) for g in self.generators]
            return Action(self.pair, desc, gens)
        except (ValueError, TypeError) as exc:
            raise ConfigError(str(exc)) from exc

    def action(self) -> Action:
        """A unital action: non-unital data passes through the unitisation."""
        act = self.raw_action()
        return act if act.unital else unitise(act).action

    def with_overrides(self, **kw) -> "RunConfig":
        kw = {k: v for k, v in kw.items() if v is not None}
        tol = kw.pop("tol", None)
        cfg = replace(self, **kw)
        if tol is not None:
            cfg.tolerances = dict(cfg.tolerances, relation=tol)
        return cfg

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "pair": self.pair_kind,
            "algebra": {"block_dims": list(self.block_dims), "unital": self.unital,
                        "generators": self.generators},
            "L": self.L,
            "L_eq": self.L_eq,
            "seed": self.seed,
            "tolerances": dict(self.tolerances),
            "kk": {"L": self.kk_L, "L_inner": self.kk_L_inner, "t_samples": self.t_samples},
        }

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        try:
            alg = d.get("algebra", {})
            kk = d.get("kk", {})
            return cls(
                n=int(d.get("n", 2)),
                pair_kind=d.get("pair", "free"),
                block_dims=tuple(int(x) for x in alg.get("block_dims", (1, 1, 2))),
                unital=bool(alg.get("unital", True)),
                generators=alg.get("generators"),
                L=int(d.get("L", 6)),
                L_eq=int(d.get("L_eq", 8)),
                seed=int(d.get("seed", 0)),
                tolerances=dict(DEFAULT_TOLERANCES, **d.get("tolerances", {})),
                kk_L=int(kk.get("L", 6)),
                kk_L_inner=int(kk.get("L_inner", 4)),
                t_samples=int(kk.get("t_samples", 5)),
            )
        except (TypeError, AttributeError, ValueError) as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(f"malformed config: {exc}") from exc

    @classmethod
    def from_action(cls, action: Action, **kw) -> "RunConfig":
        pair = action.pair
        kind = "abelian" if isinstance(pair, FreeAbelianGroup) else "free"
        return cls(n=pair.num_generators, pair_kind=kind, block_dims=tuple(action.desc.block_dims),
                   unital=action.unital, generators=[g.to_record() for g in action.generators], **kw)


def load_config(path) -> RunConfig:
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    return RunConfig.from_dict(data)
