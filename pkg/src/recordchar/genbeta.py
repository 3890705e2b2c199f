"""Four-parameter Beta law ``B_{r,s}(u, v)`` on ``[u, v]``.

Density::

    f(y) = (y - u)^(s-1) (v - y)^(r-1) / (B(r, s) (v - u)^(r+s-1))

Shape convention (easy to get backwards): ``s`` governs the LEFT end ``u``
and ``r`` the RIGHT end ``v``. Hence ``(B - u) / (v - u)`` is a standard
Beta with parameters ``(a, b) = (s, r)``, and the mean is
``(u r + v s) / (r + s)``.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh_tridiagonal
from scipy.special import betaln

from .diffops import TestFunction, as_test_function
from .errors import DomainError

__all__ = [
    "GenBetaParams",
    "genbeta_pdf",
    "genbeta_mean",
    "genbeta_sample",
    "genbeta_sample_via_increments",
    "genbeta_expect",
    "jacobi_rule",
    "gauss_jacobi",
]

DEFAULT_NODES = 32


@dataclass(frozen=True)
class GenBetaParams:
    r: float
    s: float
    u: float
    v: float

    def __post_init__(self) -> None:
        if not (self.r > 0 and self.s > 0):
            raise DomainError(f"shapes must be positive, got r={self.r}, s={self.s}")
        if not self.u < self.v:
            raise DomainError(f"need u < v, got u={self.u}, v={self.v}")

    @property
    def width(self) -> float:
        return self.v - self.u


def genbeta_pdf(p: GenBetaParams, y):
    """Density at ``y``; 0 off ``[u, v]`` and ``+inf`` at an endpoint whose exponent is negative."""
    ya = np.asarray(y, dtype=float)
    inside = (ya >= p.u) & (ya <= p.v)
    lognorm = betaln(p.r, p.s) + (p.r + p.s - 1) * math.log(p.width)
    with np.errstate(divide="ignore", invalid="ignore"):
        left = np.clip(ya - p.u, 0.0, None)
        right = np.clip(p.v - ya, 0.0, None)
        # x**0 == 1 even at x == 0, which gives the right endpoint limit for shape 1.
        val = left ** (p.s - 1) * right ** (p.r - 1) * math.exp(-lognorm)
    out = np.where(inside, val, 0.0)
    return float(out) if np.ndim(y) == 0 else out


def genbeta_mean(p: GenBetaParams) -> float:
    return (p.u * p.r + p.v * p.s) / (p.r + p.s)


def genbeta_sample(p: GenBetaParams, rng: np.random.Generator, size=None):
    """Draw via two independent gammas: ``u + (v-u) G_s / (G_s + G_r)``."""
    gs = rng.standard_gamma(p.s, size)
    gr = rng.standard_gamma(p.r, size)
    z = gs / (gs + gr)
    return np.clip(p.u + p.width * z, p.u, p.v)


def genbeta_sample_via_increments(p: GenBetaParams, rng: np.random.Generator, size=None):
    """Draw from the record-increment form ``(u D_right + v D_left) / (D_left + D_right)``.

    ``D_left`` is a sum of ``s`` unit exponentials (the spacing from the
    earlier covariate record to ``R_n``) and ``D_right`` a sum of ``r`` (from
    ``R_n`` to the later one). Only integer shapes make sense here.
    """
    r, s = p.r, p.s
    if not (float(r).is_integer() and float(s).is_integer()):
        raise DomainError(f"increment representation needs integer r, s; got r={r}, s={s}")
    r, s = int(r), int(s)
    shape = () if size is None else (size if isinstance(size, tuple) else (size,))
    d_left = rng.standard_exponential(shape + (s,)).sum(axis=-1)
    d_right = rng.standard_exponential(shape + (r,)).sum(axis=-1)
    out = (p.u * d_right + p.v * d_left) / (d_left + d_right)
    return np.clip(out, p.u, p.v)


def gauss_jacobi(m: int, alpha: float, beta: float) -> tuple[np.ndarray, np.ndarray]:
    """Golub-Welsch nodes and weights for ``(1-x)^alpha (1+x)^beta`` on ``[-1, 1]``.

    Weights are normalized to sum to one. The recurrence is written out so
    that the removable singularities at ``alpha + beta in {0, -1}`` are
    handled by their limits (scipy's routine breaks down as
    ``alpha = beta -> -1/2``).
    """
    if m < 1:
        raise DomainError(f"need at least one node, got {m}")
    if not (alpha > -1 and beta > -1):
        raise DomainError(f"Jacobi exponents must exceed -1, got ({alpha}, {beta})")
    ab = alpha + beta
    i = np.arange(m, dtype=float)
    diag = np.empty(m)
    diag[0] = (beta - alpha) / (ab + 2)
    k = i[1:]
    diag[1:] = (beta**2 - alpha**2) / ((2 * k + ab) * (2 * k + ab + 2))
    off = np.empty(max(m - 1, 0))
    if m > 1:
        off[0] = 4 * (1 + alpha) * (1 + beta) / ((2 + ab) ** 2 * (3 + ab))
        k = i[2:]
        t = 2 * k + ab
        off[1:] = 4 * k * (k + alpha) * (k + beta) * (k + ab) / (t**2 * (t**2 - 1))
    nodes, vecs = eigh_tridiagonal(diag, np.sqrt(off))
    w = vecs[0] ** 2
    return nodes, w / w.sum()


@functools.lru_cache(maxsize=256)
def jacobi_rule(r: float, s: float, m: int = DEFAULT_NODES) -> tuple[np.ndarray, np.ndarray]:
    """Nodes on ``[0, 1]`` and probability weights for the standard Beta(s, r) law.

    Gauss-Jacobi with weight ``(1-x)^(r-1) (1+x)^(s-1)`` on ``[-1, 1]``,
    mapped affinely; exact for polynomials of degree ``<= 2m - 1``.
    """
    x, w = gauss_jacobi(m, r - 1.0, s - 1.0)
    nodes = (x + 1.0) / 2.0
    nodes.setflags(write=False)
    w.setflags(write=False)
    return nodes, w


def genbeta_expect(p: GenBetaParams, psi, m: int = DEFAULT_NODES) -> float:
    """``E[psi(B)]`` by ``m``-node Gauss-Jacobi quadrature.

    The Beta weight is absorbed into the rule, so only ``psi`` is sampled;
    the result is exact (to rounding) for polynomial ``psi`` of degree up to
    ``2m - 1``.
    """
    f: TestFunction = as_test_function(psi)
    nodes, w = jacobi_rule(float(p.r), float(p.s), m)
    y = p.u + p.width * nodes
    vals = np.asarray(f(y), dtype=float)
    if vals.shape != y.shape:
        vals = np.broadcast_to(vals, y.shape)
    bad = ~np.isfinite(vals)
    if bad.any():
        k = int(np.flatnonzero(bad)[0])
        raise FloatingPointError(f"{f.name} is not finite at quadrature node y={y[k]!r}")
    return float(np.dot(w, vals))
