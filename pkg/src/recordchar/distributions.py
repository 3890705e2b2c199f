"""Parametric lifetime laws with closed-form cdf, pdf, quantile and hazard.

The exponential member ``F(x) = 1 - exp(-c (x - l))`` is the law being
characterized; Weibull, Pareto and uniform laws act as negative controls
(increasing hazard, decreasing hazard, bounded support).

All functions accept scalars or numpy arrays and broadcast.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any, Mapping

import numpy as np

from .errors import DomainError

__all__ = [
    "DistributionSpec",
    "cdf",
    "pdf",
    "quantile",
    "cumulative_hazard",
    "inverse_cumulative_hazard",
    "hazard",
    "sample_iid",
]

# Largest probability passed to a quantile; keeps record simulation finite.
P_MAX = 1.0 - 1e-15

_PARAM_NAMES: dict[str, tuple[str, ...]] = {
    "exponential": ("rate", "location"),
    "weibull": ("shape", "scale"),
    "pareto": ("shape", "scale"),
    "uniform": ("low", "high"),
}
_DEFAULTS: dict[str, dict[str, float]] = {
    "exponential": {"location": 0.0},
    "weibull": {"scale": 1.0},
    "pareto": {"scale": 1.0},
    "uniform": {},
}


@dataclass(frozen=True)
class DistributionSpec:
    """Immutable description of one absolutely continuous law.

    Use the named constructors (:meth:`exponential`, :meth:`weibull`,
    :meth:`pareto`, :meth:`uniform`) rather than building the tuple of
    parameters by hand.
    """

    kind: str
    params: tuple[float, ...]

    def __post_init__(self) -> None:
        if self.kind not in _PARAM_NAMES:
            raise DomainError(f"unknown distribution kind {self.kind!r}")
        names = _PARAM_NAMES[self.kind]
        if len(self.params) != len(names):
            raise DomainError(f"{self.kind} takes parameters {names}, got {self.params}")
        params = tuple(float(p) for p in self.params)
        if not all(np.isfinite(params)):
            raise DomainError(f"non-finite parameter in {params}")
        object.__setattr__(self, "params", params)
        a, b = params
        if self.kind == "uniform":
            if not a < b:
                raise DomainError(f"uniform endpoints must satisfy low < high, got {a}, {b}")
        elif self.kind == "exponential":
            if a <= 0:
                raise DomainError(f"exponential rate must be positive, got {a}")
        elif a <= 0 or b <= 0:
            raise DomainError(f"{self.kind} shape and scale must be positive, got {params}")

    @classmethod
    def exponential(cls, rate: float = 1.0, location: float = 0.0) -> DistributionSpec:
        return cls("exponential", (rate, location))

    @classmethod
    def weibull(cls, shape: float, scale: float = 1.0) -> DistributionSpec:
        return cls("weibull", (shape, scale))

    @classmethod
    def pareto(cls, shape: float, scale: float = 1.0) -> DistributionSpec:
        return cls("pareto", (shape, scale))

    @classmethod
    def uniform(cls, low: float = 0.0, high: float = 1.0) -> DistributionSpec:
        return cls("uniform", (low, high))

    @property
    def is_exponential(self) -> bool:
        return self.kind == "exponential"

    @property
    def support(self) -> tuple[float, float]:
        """Closed hull ``(lower, upper)`` of the support; upper may be ``inf``."""
        a, b = self.params
        if self.kind == "exponential":
            return b, np.inf
        if self.kind == "weibull":
            return 0.0, np.inf
        if self.kind == "pareto":
            return b, np.inf
        return a, b

    def named_params(self) -> dict[str, float]:
        return dict(zip(_PARAM_NAMES[self.kind], self.params))

    def to_dict(self) -> dict[str, Any]:
        return {"kind": self.kind, **self.named_params()}

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> DistributionSpec:
        data = dict(data)
        try:
            kind = str(data.pop("kind")).lower()
        except KeyError:
            raise DomainError("distribution record lacks a 'kind' field") from None
        if kind not in _PARAM_NAMES:
            raise DomainError(f"unknown distribution kind {kind!r}")
        names = _PARAM_NAMES[kind]
        unknown = set(data) - set(names)
        if unknown:
            raise DomainError(f"unknown {kind} parameters: {sorted(unknown)}")
        values = {**_DEFAULTS[kind], **data}
        missing = [n for n in names if n not in values]
        if missing:
            raise DomainError(f"missing {kind} parameters: {missing}")
        return cls(kind, tuple(float(values[n]) for n in names))

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> DistributionSpec:
        return cls.from_dict(json.loads(text))

    def __str__(self) -> str:
        args = ", ".join(f"{k}={v:g}" for k, v in self.named_params().items())
        return f"{self.kind.capitalize()}({args})"

    # Method forms of the module-level functions.
    def cdf(self, x):
        return cdf(self, x)

    def pdf(self, x):
        return pdf(self, x)

    def quantile(self, p):
        return quantile(self, p)

    def cumulative_hazard(self, x):
        return cumulative_hazard(self, x)

    def hazard(self, x):
        return hazard(self, x)


def _out(values: np.ndarray, like) -> Any:
    return float(values) if np.ndim(like) == 0 else values


def cdf(spec: DistributionSpec, x):
    """Distribution function ``F(x)``; 0 below and 1 above the support."""
    xa = np.asarray(x, dtype=float)
    a, b = spec.params
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        if spec.kind == "exponential":
            out = np.where(xa <= b, 0.0, -np.expm1(-a * (xa - b)))
        elif spec.kind == "weibull":
            z = np.maximum(xa, 0.0) / b
            out = np.where(xa <= 0, 0.0, -np.expm1(-(z**a)))
        elif spec.kind == "pareto":
            out = np.where(xa <= b, 0.0, -np.expm1(a * np.log(b / np.maximum(xa, b))))
        else:
            out = np.clip((xa - a) / (b - a), 0.0, 1.0)
    return _out(out, x)


def pdf(spec: DistributionSpec, x):
    """Density ``f(x)``, right-continuous at the lower endpoint, 0 off support."""
    xa = np.asarray(x, dtype=float)
    a, b = spec.params
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        if spec.kind == "exponential":
            out = np.where(xa < b, 0.0, a * np.exp(-a * (xa - b)))
        elif spec.kind == "weibull":
            z = np.maximum(xa, 0.0) / b
            out = np.where(xa < 0, 0.0, (a / b) * z ** (a - 1) * np.exp(-(z**a)))
        elif spec.kind == "pareto":
            xs = np.maximum(xa, b)
            out = np.where(xa < b, 0.0, a * b**a / xs ** (a + 1))
        else:
            out = np.where((xa >= a) & (xa <= b), 1.0 / (b - a), 0.0)
    return _out(out, x)


def quantile(spec: DistributionSpec, p):
    """Left-continuous inverse of the cdf on ``[0, 1)``.

    Probabilities above ``1 - 1e-15`` are clamped so that the result stays
    finite. Raises DomainError for ``p`` outside ``[0, 1)``.
    """
    pa = np.asarray(p, dtype=float)
    if np.any(~((pa >= 0) & (pa < 1))):
        raise DomainError("quantile needs probabilities in [0, 1)")
    pa = np.minimum(pa, P_MAX)
    a, b = spec.params
    tail = -np.log1p(-pa)  # cumulative hazard at the quantile
    if spec.kind == "exponential":
        out = b + tail / a
    elif spec.kind == "weibull":
        out = b * tail ** (1.0 / a)
    elif spec.kind == "pareto":
        out = b * np.exp(tail / a)
    else:
        out = a + pa * (b - a)
    return _out(out, p)


def cumulative_hazard(spec: DistributionSpec, x):
    """``H(x) = -ln(1 - F(x))``, evaluated in closed form.

    Returns 0 below the support and ``inf`` where ``F(x) = 1`` (uniform at or
    beyond its upper endpoint); ``inf`` is the distinct report of that case.
    """
    xa = np.asarray(x, dtype=float)
    a, b = spec.params
    with np.errstate(divide="ignore", invalid="ignore"):
        if spec.kind == "exponential":
            out = a * np.maximum(xa - b, 0.0)
        elif spec.kind == "weibull":
            out = (np.maximum(xa, 0.0) / b) ** a
        elif spec.kind == "pareto":
            out = a * np.log(np.maximum(xa, b) / b)
        else:
            xs = np.clip(xa, a, b)
            out = np.where(xs >= b, np.inf, np.log(b - a) - np.log(b - xs))
    return _out(out, x)


def inverse_cumulative_hazard(spec: DistributionSpec, w):
    """Solve ``H(x) = w`` for ``w >= 0``.

    Equals ``quantile(1 - exp(-w))`` but stays accurate for large ``w``,
    where that probability rounds to 1.
    """
    wa = np.asarray(w, dtype=float)
    if np.any(~(wa >= 0)):
        raise DomainError("cumulative hazard values must be non-negative")
    a, b = spec.params
    if spec.kind == "exponential":
        out = b + wa / a
    elif spec.kind == "weibull":
        out = b * wa ** (1.0 / a)
    elif spec.kind == "pareto":
        out = b * np.exp(wa / a)
    else:
        out = b - (b - a) * np.exp(-wa)
    return _out(out, w)


def hazard(spec: DistributionSpec, x):
    """Hazard rate ``h = f / (1 - F) = H'`` on the support, 0 below it."""
    xa = np.asarray(x, dtype=float)
    a, b = spec.params
    with np.errstate(divide="ignore", invalid="ignore"):
        if spec.kind == "exponential":
            out = np.where(xa < b, 0.0, a)
        elif spec.kind == "weibull":
            out = np.where(xa < 0, 0.0, (a / b) * (np.maximum(xa, 0.0) / b) ** (a - 1))
        elif spec.kind == "pareto":
            out = np.where(xa < b, 0.0, a / np.maximum(xa, b))
        else:
            out = np.where(xa < a, 0.0, np.where(xa >= b, np.inf, 1.0 / (b - xa)))
    return _out(np.asarray(out, dtype=float) + 0.0 * xa, x)


def sample_iid(spec: DistributionSpec, rng: np.random.Generator, m: int) -> np.ndarray:
    """Draw ``m`` iid values by the quantile transform of uniforms."""
    if m < 0:
        raise DomainError(f"sample size must be non-negative, got {m}")
    return np.asarray(quantile(spec, rng.random(m)), dtype=float)
