"""Experiment configuration files for the command-line runner.

A config is a JSON object. Fields are validated strictly: a misspelt or
unknown field is an error, never silently ignored. The seed is always
explicit once a config has been parsed (drawn from OS entropy if absent),
so a serialized config reproduces its run exactly.
"""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass, field, fields
from importlib import resources
from typing import Any

import numpy as np

from .distributions import DistributionSpec
from .errors import DomainError

__all__ = ["ConfigError", "ExperimentConfig", "load_config", "bundled_config_names", "COMMANDS"]

COMMANDS = ("simulate", "verify-proposition", "verify-identities", "goftest")
GRID_POLICIES = ("lattice", "random", "explicit")


class ConfigError(DomainError):
    pass


@dataclass
class ExperimentConfig:
    command: str
    seed: int | None = None
    distribution: DistributionSpec = field(default_factory=DistributionSpec.exponential)
    # simulate
    k: int = 5
    replicates: int = 3
    mode: str = "records"
    length: int = 300
    # verify-proposition
    indices: list[tuple[int, int, int]] = field(default_factory=lambda: [(3, 1, 1)])
    grid: dict = field(default_factory=lambda: {"policy": "lattice", "size": 3})
    psi: list = field(default_factory=lambda: ["x"])
    mc_samples: int = 100_000
    z: float = 5.0
    expect: str = "consistent"
    # verify-identities
    polys: int = 200
    beta_polys: int = 20
    intervals: int = 50
    r_values: list[int] | None = None
    s_values: list[int] | None = None
    fault_injection: bool = False
    # goftest
    bootstrap: int = 500
    alpha: float = 0.05
    centered: bool = True
    data: str | None = None
    # output
    out: str | None = None

    def __post_init__(self) -> None:
        if self.seed is None:
            self.seed = int(np.random.SeedSequence().entropy % 2**64)
        self.validate()

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}; expected one of {COMMANDS}")
        if not 0 <= int(self.seed) < 2**64:
            raise ConfigError(f"seed must be an unsigned 64-bit integer, got {self.seed}")
        if self.k < 1:
            raise ConfigError(f"k must be >= 1, got {self.k}")
        if self.replicates < 1 or self.length < 1:
            raise ConfigError("replicates and length must be >= 1")
        if self.mode not in ("records", "series"):
            raise ConfigError(f"mode must be 'records' or 'series', got {self.mode!r}")
        for idx in self.indices:
            if len(idx) != 3:
                raise ConfigError(f"index triple must be (n, s, r), got {idx}")
            n, s, r = idx
            if not (1 <= s <= n - 1 and r >= 1):
                raise ConfigError(f"indices need 1 <= s <= n-1 and r >= 1, got (n, s, r) = {tuple(idx)}")
        policy = self.grid.get("policy")
        if policy not in GRID_POLICIES:
            raise ConfigError(f"grid policy must be one of {GRID_POLICIES}, got {policy!r}")
        allowed = {"lattice": {"policy", "size"}, "random": {"policy", "count"},
                   "explicit": {"policy", "pairs"}}[policy]
        extra = set(self.grid) - allowed
        if extra:
            raise ConfigError(f"unknown grid fields {sorted(extra)} for policy {policy!r}")
        if self.mc_samples < 100:
            raise ConfigError("mc_samples must be >= 100")
        if self.expect not in ("consistent", "violated"):
            raise ConfigError(f"expect must be 'consistent' or 'violated', got {self.expect!r}")
        if self.bootstrap < 200:
            raise ConfigError("bootstrap must be >= 200")
        if not 0 < self.alpha < 1:
            raise ConfigError("alpha must lie in (0, 1)")

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {}
        for f in fields(self):
            val = getattr(self, f.name)
            if f.name == "distribution":
                val = val.to_dict()
            elif f.name == "indices":
                val = [list(t) for t in val]
            out[f.name] = val
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> ExperimentConfig:
        data = dict(data)
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config fields: {sorted(unknown)}")
        if "command" not in data:
            raise ConfigError("config lacks a 'command' field")
        if "distribution" in data:
            try:
                data["distribution"] = DistributionSpec.from_dict(data["distribution"])
            except DomainError as exc:
                raise ConfigError(f"distribution: {exc}") from None
        if "indices" in data:
            data["indices"] = [tuple(int(x) for x in t) for t in data["indices"]]
        try:
            return cls(**data)
        except TypeError as exc:
            raise ConfigError(str(exc)) from None

    @classmethod
    def from_json(cls, text: str) -> ExperimentConfig:
        try:
            return cls.from_dict(json.loads(text))
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from None

    def digest(self) -> str:
        """Short hash of the canonical serialization (excluding output paths)."""
        d = self.to_dict()
        d.pop("out")
        text = json.dumps(d, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(text.encode()).hexdigest()[:12]


def bundled_config_names() -> list[str]:
    root = resources.files("recordchar") / "configs"
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def load_config(ref: str | os.PathLike) -> ExperimentConfig:
    """Load a config from a path, or by bundled name such as ``exp-default``."""
    path = str(ref)
    if os.path.exists(path):
        with open(path, encoding="utf-8") as fh:
            return ExperimentConfig.from_json(fh.read())
    res = resources.files("recordchar") / "configs" / f"{path}.json"
    if res.is_file():
        return ExperimentConfig.from_json(res.read_text(encoding="utf-8"))
    raise ConfigError(f"no config file or bundled config named {path!r} "
                      f"(bundled: {', '.join(bundled_config_names())})")
