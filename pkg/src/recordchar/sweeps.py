"""Randomized sweeps over the divided-difference identities.

Each sweep returns one :class:`IdentityRow` per checked tuple. Exact
identities (13), (17), the by-parts recursion and the closed form of
``I(j, s)`` are evaluated in rational arithmetic and must give residual 0.
The Beta-expectation identity compares floating Gauss-Jacobi quadrature
with exact algebra and is judged on relative error.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Iterator

import numpy as np

from .diffops import (
    I_integral,
    MQuery,
    M_operator,
    Polynomial,
    check_I_recursion,
    check_identity_13,
    check_identity_17,
    poly_derivative,
    rhs_prior_characterization,
)
from .genbeta import GenBetaParams, genbeta_expect

__all__ = [
    "IdentityRow",
    "random_polynomial",
    "random_interval",
    "sweep_beta_expectation",
    "sweep_derivative_split",
    "sweep_mixed_partials",
    "sweep_I_recursion",
    "sweep_I_closed_form",
    "run_identity_sweeps",
    "THRESHOLDS",
]

# Pass thresholds per identity: exact paths must vanish, quadrature paths are relative.
THRESHOLDS = {
    "beta_expectation": 1e-10,
    "derivative_split": 0.0,
    "mixed_partials": 0.0,
    "I_recursion": 0.0,
    "I_closed_form": 1e-10,
}


@dataclass
class IdentityRow:
    identity: str
    poly: str
    a: int
    b: int
    u: str
    v: str
    residual: float

    COLUMNS = ("identity", "poly", "a", "b", "u", "v", "residual")

    def as_row(self) -> dict:
        return asdict(self)


def random_polynomial(rng: np.random.Generator, max_degree: int) -> Polynomial:
    """Random polynomial of degree <= max_degree with small rational coefficients."""
    deg = int(rng.integers(0, max_degree + 1))
    nums = rng.integers(-9, 10, size=deg + 1)
    dens = rng.integers(1, 8, size=deg + 1)
    if nums[-1] == 0:
        nums[-1] = 1
    return Polynomial(Fraction(int(a), int(b)) for a, b in zip(nums, dens))


def random_interval(rng: np.random.Generator, low: float = -3.0, high: float = 3.0,
                    grain: int = 1024) -> tuple[Fraction, Fraction]:
    """Random ``u < v`` on a dyadic lattice, so both are exact as floats and as Fractions."""
    while True:
        a, b = sorted(int(x) for x in rng.integers(int(low * grain), int(high * grain) + 1, size=2))
        if a < b:
            return Fraction(a, grain), Fraction(b, grain)


def _row(name, g, a, b, u, v, residual) -> IdentityRow:
    return IdentityRow(name, " ".join(g.to_list()) or "0", a, b, str(u), str(v), float(residual))


def sweep_beta_expectation(rng, polys: int = 20, max_degree: int = 8, r_max: int = 4, s_max: int = 4,
                      intervals: int = 50, r_values=None, s_values=None,
                      corruption: Polynomial | None = None) -> Iterator[IdentityRow]:
    """``E[g^(r+s-1)(B_{r,s}(u,v))]`` vs ``M(r-1, s-1)/B(r, s)``, relative residual.

    ``corruption`` is added to ``g`` on the quadrature side only; it exists
    so the harness can demonstrate that it detects a wrong ``g``.
    """
    r_values = list(r_values or range(1, r_max + 1))
    s_values = list(s_values or range(1, s_max + 1))
    uv = [random_interval(rng) for _ in range(intervals)]
    for _ in range(polys):
        g = random_polynomial(rng, max_degree)
        g_quad = g + corruption if corruption is not None else g
        for r in r_values:
            for s in s_values:
                dg = poly_derivative(g_quad, r + s - 1)
                for u, v in uv:
                    lhs = genbeta_expect(GenBetaParams(r, s, float(u), float(v)), dg)
                    rhs = float(rhs_prior_characterization(g, r, s, u, v))
                    yield _row("beta_expectation", g, r, s, u, v,
                               abs(lhs - rhs) / max(1.0, abs(rhs)))


def sweep_derivative_split(rng, polys: int = 200, max_degree: int = 8, j_max: int = 6) -> Iterator[IdentityRow]:
    for _ in range(polys):
        g = random_polynomial(rng, max_degree)
        u, v = random_interval(rng)
        for j in range(1, j_max + 1):
            yield _row("derivative_split", g, 0, j, u, v, abs(check_identity_13(g, j, u, v)))


def sweep_mixed_partials(rng, polys: int = 200, max_degree: int = 8, i_max: int = 5,
                      j_max: int = 5) -> Iterator[IdentityRow]:
    for _ in range(polys):
        g = random_polynomial(rng, max_degree)
        u, v = random_interval(rng)
        for i in range(1, i_max + 1):
            for j in range(1, j_max + 1):
                yield _row("mixed_partials", g, i, j, u, v, abs(check_identity_17(g, i, j, u, v)))


def sweep_I_recursion(rng, polys: int = 200, max_degree: int = 10, j_max: int = 3,
                      s_max: int = 4) -> Iterator[IdentityRow]:
    for _ in range(polys):
        g = random_polynomial(rng, max_degree)
        u, v = random_interval(rng)
        for j in range(1, j_max + 1):
            for s in range(2, s_max + 1):
                yield _row("I_recursion", g, j, s, u, v, abs(check_I_recursion(g, j, s, u, v)))


def sweep_I_closed_form(rng, polys: int = 50, max_degree: int = 8, j_max: int = 3,
                        s_max: int = 4) -> Iterator[IdentityRow]:
    """``I(j, s)`` vs ``(v-u)^(s+j-1) M(j-1, s-1)``, relative residual."""
    for _ in range(polys):
        g = random_polynomial(rng, max_degree)
        u, v = random_interval(rng)
        for j in range(1, j_max + 1):
            for s in range(1, s_max + 1):
                lhs = I_integral(g, j, s, u, v)
                rhs = (v - u) ** (s + j - 1) * M_operator(g, MQuery(j - 1, s - 1, u, v))
                scale = max(Fraction(1), abs(rhs))
                yield _row("I_closed_form", g, j, s, u, v, abs(lhs - rhs) / scale)


def run_identity_sweeps(seed: int, polys: int = 200, beta_polys: int = 20, intervals: int = 50,
                        r_values=None, s_values=None,
                        corruption: Polynomial | None = None) -> list[IdentityRow]:
    """All five sweeps; sweep ``k`` draws from child ``k`` of ``seed``."""
    children = [np.random.default_rng(c) for c in np.random.SeedSequence(seed).spawn(5)]
    small = r_values is not None or s_values is not None
    rows: list[IdentityRow] = []
    rows += sweep_beta_expectation(children[0], polys=beta_polys, intervals=intervals,
                              r_values=r_values, s_values=s_values, corruption=corruption)
    if small:
        # restricted runs keep the exact sweeps at the same smallest orders
        j1 = 1
        rows += sweep_derivative_split(children[1], polys=polys, j_max=j1)
        rows += sweep_mixed_partials(children[2], polys=polys, i_max=1, j_max=1)
        rows += sweep_I_recursion(children[3], polys=polys, j_max=1, s_max=2)
        rows += sweep_I_closed_form(children[4], polys=polys, j_max=1, s_max=1)
    else:
        rows += sweep_derivative_split(children[1], polys=polys)
        rows += sweep_mixed_partials(children[2], polys=polys)
        rows += sweep_I_recursion(children[3], polys=polys)
        rows += sweep_I_closed_form(children[4], polys=polys)
    return rows
