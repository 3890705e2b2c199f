"""Upper record values: extraction, simulation, and their densities.

Index convention: ``R_1 = X_1`` and the marginal density of ``R_n`` is
``H(x)^(n-1) / (n-1)! * f(x)``, with ``H = -ln(1 - F)`` the cumulative
hazard, so that ``f_1 = f``. (A convention with exponents ``n`` and
``n!`` shifts every index by one; the conditional density of a record
given two others is the same under either, because the shift cancels.)

Simulation uses the fact that ``H(R_1) < H(R_2) < ...`` are the arrival
times of a unit-rate Poisson process, i.e. partial sums of unit
exponentials. For the exponential law this gives
``R_k = l + (E_1 + ... + E_k) / c`` exactly.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, stats

from .distributions import DistributionSpec, cumulative_hazard, hazard, inverse_cumulative_hazard, pdf
from .errors import DegenerateConditioningError, DomainError

__all__ = [
    "RecordSequence",
    "extract_records",
    "simulate_records",
    "simulate_record_process",
    "record_quantile",
    "record_pdf",
    "record_joint_pdf",
    "record_conditional_pdf",
    "conditional_normalizer",
    "sample_record_conditional",
    "TABLE_SIZE",
]

TABLE_SIZE = 2048
NORMALIZER_RTOL = 1e-10
_TINY = 1e-300


@dataclass(frozen=True)
class RecordSequence:
    values: np.ndarray
    times: np.ndarray | None = None

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 1 or np.any(np.diff(values) <= 0):
            raise DomainError("record values must form a strictly increasing 1-d sequence")
        object.__setattr__(self, "values", values)
        if self.times is not None:
            times = np.asarray(self.times, dtype=np.int64)
            if times.shape != values.shape:
                raise DomainError("record times and values differ in length")
            if len(times) and (times[0] != 1 or np.any(np.diff(times) <= 0)):
                raise DomainError("record times must start at 1 and strictly increase")
            object.__setattr__(self, "times", times)

    def __len__(self) -> int:
        return len(self.values)


def extract_records(series) -> RecordSequence:
    """Upper records of ``series`` with their 1-based record times.

    An observation is a record when it strictly exceeds every earlier one;
    the first observation is always a record.
    """
    x = np.asarray(series, dtype=float).ravel()
    if x.size == 0:
        raise DomainError("cannot extract records from an empty series")
    prev_max = np.maximum.accumulate(x)[:-1]
    is_record = np.concatenate(([True], x[1:] > prev_max))
    idx = np.flatnonzero(is_record)
    return RecordSequence(x[idx], idx + 1)


def _hazard_to_value(spec: DistributionSpec, h_values: np.ndarray) -> np.ndarray:
    return inverse_cumulative_hazard(spec, h_values)


def simulate_records(spec: DistributionSpec, k: int, rng: np.random.Generator, size=None) -> np.ndarray:
    """First ``k`` record values; shape ``(k,)`` or ``(size, k)``."""
    if k < 1:
        raise DomainError(f"need k >= 1 records, got {k}")
    shape = (k,) if size is None else (size, k)
    s = np.cumsum(rng.standard_exponential(shape), axis=-1)
    out = _hazard_to_value(spec, s)
    return np.asarray(out, dtype=float)


def simulate_record_process(spec: DistributionSpec, k: int, length,
                            rng: np.random.Generator, size: int) -> tuple[np.ndarray, np.ndarray]:
    """First ``k`` records and record times of ``size`` iid series.

    ``length`` is a common series length or one length per series.

    Equivalent in law to generating each series and calling
    :func:`extract_records`, but costs O(k) per series: given ``R_j`` with
    ``H(R_j) = S_j`` the wait to the next record is geometric with success
    probability ``exp(-S_j)``, independent of the next record value.

    Returns ``(values, times)`` of shape ``(size, k)``. Entries whose record
    time exceeds ``length`` are NaN in ``values`` and ``-1`` in ``times``.
    """
    lengths = np.asarray(length)
    if k < 1 or np.any(lengths < 1):
        raise DomainError("need k >= 1 and series lengths >= 1")
    if lengths.ndim == 1:
        lengths = lengths[:, None]
    s = np.cumsum(rng.standard_exponential((size, k)), axis=-1)
    values = np.asarray(_hazard_to_value(spec, s), dtype=float)
    # geometric waits by inversion: ceil(log U / log(1 - p)), p = exp(-S)
    uni = rng.random((size, k - 1))
    with np.errstate(divide="ignore"):
        waits = np.ceil(np.log1p(-uni) / np.log1p(-np.exp(-s[:, :-1])))
    waits = np.maximum(waits, 1.0)
    times = np.concatenate([np.ones((size, 1)), 1.0 + np.cumsum(waits, axis=-1)], axis=-1)
    late = ~(times <= lengths)
    values[late] = np.nan
    itimes = np.where(late, -1, np.minimum(times, 2.0**62)).astype(np.int64)
    return values, itimes


def record_quantile(spec: DistributionSpec, k: int, p):
    """Quantile of ``R_k``; uses ``H(R_k) ~ Gamma(k, 1)``."""
    g = stats.gamma.ppf(p, k)
    return _hazard_to_value(spec, np.asarray(g, dtype=float))


def record_pdf(spec: DistributionSpec, n: int, x):
    """Density of ``R_n``: ``H(x)^(n-1) / (n-1)! * f(x)``."""
    if n < 1:
        raise DomainError(f"record index must be >= 1, got {n}")
    hx = np.asarray(cumulative_hazard(spec, x), dtype=float)
    out = hx ** (n - 1) / math.factorial(n - 1) * np.asarray(pdf(spec, x), dtype=float)
    return float(out) if np.ndim(x) == 0 else out


def record_joint_pdf(spec: DistributionSpec, m: int, n: int, x, y):
    """Joint density of ``(R_m, R_n)`` at ``x < y``, ``1 <= m < n``.

    ``H(x)^(m-1)/(m-1)! * h(x) * (H(y) - H(x))^(n-m-1)/(n-m-1)! * f(y)``
    """
    if not 1 <= m < n:
        raise DomainError(f"need 1 <= m < n, got m={m}, n={n}")
    xa, ya = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    if np.any(xa >= ya):
        raise DomainError("joint record density needs x < y")
    hx = np.asarray(cumulative_hazard(spec, xa))
    hy = np.asarray(cumulative_hazard(spec, ya))
    out = (hx ** (m - 1) / math.factorial(m - 1) * np.asarray(hazard(spec, xa))
           * (hy - hx) ** (n - m - 1) / math.factorial(n - m - 1) * np.asarray(pdf(spec, ya)))
    return float(out) if np.ndim(out) == 0 else out


def _check_conditioning(spec: DistributionSpec, n: int, s: int, r: int, u: float, v: float) -> None:
    if not (1 <= s <= n - 1 and r >= 1):
        raise DomainError(f"need 1 <= s <= n-1 and r >= 1, got n={n}, s={s}, r={r}")
    lo, hi = spec.support
    if not (lo <= u < v < hi):
        raise DomainError(f"need {lo} <= u < v < {hi}, got u={u}, v={v}")


def _kernel(spec: DistributionSpec, s: int, r: int, u: float, v: float, t):
    # unnormalized conditional density of the middle record
    hu, hv = cumulative_hazard(spec, u), cumulative_hazard(spec, v)
    ht = np.asarray(cumulative_hazard(spec, t), dtype=float)
    left = np.clip(ht - hu, 0.0, None) ** (s - 1)
    right = np.clip(hv - ht, 0.0, None) ** (r - 1)
    return left * np.asarray(hazard(spec, t), dtype=float) * right


@functools.lru_cache(maxsize=4096)
def conditional_normalizer(spec: DistributionSpec, s: int, r: int, u: float, v: float) -> float:
    """``int_u^v [H(t)-H(u)]^(s-1) h(t) [H(v)-H(t)]^(r-1) dt`` by adaptive quadrature."""
    val, _ = integrate.quad(lambda t: float(_kernel(spec, s, r, u, v, t)), u, v,
                            epsabs=0.0, epsrel=NORMALIZER_RTOL, limit=200)
    if not val > _TINY:
        raise DegenerateConditioningError(
            f"conditioning on R_(n-{s})={u}, R_(n+{r})={v} has normalizer {val!r} under {spec}")
    return val


def record_conditional_pdf(spec: DistributionSpec, n: int, s: int, r: int, u: float, v: float, t):
    """Density of ``R_n`` at ``t`` given ``R_(n-s) = u`` and ``R_(n+r) = v``.

    Obtained from the Markov property of records: proportional to
    ``[H(t)-H(u)]^(s-1) h(t) [H(v)-H(t)]^(r-1)`` on ``(u, v)``, normalized
    numerically. It does not depend on ``n`` beyond the constraint
    ``s <= n - 1``; for the exponential law it is the four-parameter Beta
    density with shapes ``(r, s)``.
    """
    u, v = float(u), float(v)
    _check_conditioning(spec, n, s, r, u, v)
    z = conditional_normalizer(spec, s, r, u, v)
    ta = np.asarray(t, dtype=float)
    inside = (ta >= u) & (ta <= v)
    out = np.where(inside, _kernel(spec, s, r, u, v, np.clip(ta, u, v)) / z, 0.0)
    return float(out) if np.ndim(t) == 0 else out


@functools.lru_cache(maxsize=1024)
def _inverse_cdf_table(spec: DistributionSpec, s: int, r: int, u: float, v: float):
    grid = np.linspace(u, v, TABLE_SIZE)
    dens = _kernel(spec, s, r, u, v, grid)
    cum = integrate.cumulative_trapezoid(dens, grid, initial=0.0)
    if not cum[-1] > _TINY:
        raise DegenerateConditioningError(f"empty conditional table on ({u}, {v}) under {spec}")
    cum /= cum[-1]
    grid.setflags(write=False)
    cum.setflags(write=False)
    return cum, grid


def sample_record_conditional(spec: DistributionSpec, n: int, s: int, r: int, u: float, v: float,
                              rng: np.random.Generator, size=None):
    """Draw ``R_n`` given ``R_(n-s) = u``, ``R_(n+r) = v`` by tabulated inverse cdf."""
    u, v = float(u), float(v)
    _check_conditioning(spec, n, s, r, u, v)
    cum, grid = _inverse_cdf_table(spec, s, r, u, v)
    out = np.interp(rng.random(size), cum, grid)
    return float(out) if size is None else out
