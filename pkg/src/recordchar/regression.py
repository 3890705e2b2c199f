"""Both sides of the record regression identity, and sweeps that compare them.

Left side: ``E[psi(R_n) | R_(n-s) = u, R_(n+r) = v]`` under a given law,
by adaptive quadrature against the conditional record density and by
Monte Carlo from the same density. Right side: ``E[psi(B_{r,s}(u, v))]``.
The two agree for every exponential law and fail to agree for the
non-exponential controls; :func:`verify_proposition` records both facts
as :class:`VerificationReport` rows.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Iterable, Sequence

import numpy as np
from scipy import integrate

from .diffops import Polynomial, TestFunction, as_test_function, poly_derivative, rhs_prior_characterization
from .distributions import DistributionSpec
from .errors import DomainError
from .genbeta import GenBetaParams, genbeta_expect
from .records import _check_conditioning, record_conditional_pdf, record_quantile, sample_record_conditional

__all__ = [
    "RegressionQuery",
    "VerificationReport",
    "PSI_LIBRARY",
    "named_psi",
    "regression_lhs_quadrature",
    "regression_lhs_monte_carlo",
    "regression_rhs_beta",
    "verify_proposition",
    "verify_one",
    "verify_query",
    "verify_identity_12",
    "quantile_grid",
    "DEFAULT_Z",
]

DEFAULT_Z = 5.0
LHS_RTOL = 1e-10


def _exp_neg(x):
    return np.exp(-np.asarray(x, dtype=float))


PSI_LIBRARY: dict[str, TestFunction] = {
    "x": TestFunction.polynomial(Polynomial([0, 1]), "x"),
    "x2": TestFunction.polynomial(Polynomial([0, 0, 1]), "x2"),
    "exp_neg": TestFunction.opaque(_exp_neg, "exp_neg",
                                   derivatives=[lambda x: -_exp_neg(x), _exp_neg]),
    "one": TestFunction.polynomial(Polynomial([1]), "one"),
}


def named_psi(name_or_coeffs) -> TestFunction:
    """Look up a named test function, or build a polynomial from coefficients."""
    if isinstance(name_or_coeffs, TestFunction):
        return name_or_coeffs
    if isinstance(name_or_coeffs, str):
        try:
            return PSI_LIBRARY[name_or_coeffs]
        except KeyError:
            raise DomainError(f"unknown test function {name_or_coeffs!r}; "
                              f"choose from {sorted(PSI_LIBRARY)}") from None
    g = Polynomial.from_list(list(name_or_coeffs))
    return TestFunction.polynomial(g)


@dataclass(frozen=True)
class RegressionQuery:
    spec: DistributionSpec
    n: int
    s: int
    r: int
    u: float
    v: float
    psi: TestFunction = field(default_factory=lambda: PSI_LIBRARY["x"])

    def __post_init__(self) -> None:
        object.__setattr__(self, "psi", as_test_function(self.psi))
        _check_conditioning(self.spec, self.n, self.s, self.r, float(self.u), float(self.v))

    @property
    def beta_params(self) -> GenBetaParams:
        return GenBetaParams(self.r, self.s, float(self.u), float(self.v))


def regression_lhs_quadrature(q: RegressionQuery) -> float:
    """``int_u^v psi(t) f(t | u, v) dt`` with relative tolerance 1e-10."""
    u, v = float(q.u), float(q.v)

    def integrand(t: float) -> float:
        return float(q.psi(t)) * record_conditional_pdf(q.spec, q.n, q.s, q.r, u, v, t)

    val, _ = integrate.quad(integrand, u, v, epsabs=0.0, epsrel=LHS_RTOL, limit=200)
    return float(val)


def regression_lhs_monte_carlo(q: RegressionQuery, N: int, rng: np.random.Generator) -> tuple[float, float]:
    """Sample mean of ``psi(R_n)`` over ``N`` conditional draws, with its standard error."""
    if N < 100:
        raise DomainError(f"Monte Carlo needs N >= 100, got {N}")
    t = sample_record_conditional(q.spec, q.n, q.s, q.r, q.u, q.v, rng, size=N)
    vals = np.broadcast_to(np.asarray(q.psi(t), dtype=float), t.shape)
    est = float(vals.mean())
    se = float(vals.std(ddof=1) / math.sqrt(N))
    return est, se


def regression_rhs_beta(r, s, u, v, psi) -> float:
    return genbeta_expect(GenBetaParams(r, s, float(u), float(v)), psi)


@dataclass
class VerificationReport:
    kind: str
    c_or_shape: float
    n: int
    s: int
    r: int
    u: float
    v: float
    psi: str
    lhs_quad: float = math.nan
    lhs_mc: float = math.nan
    se: float = math.nan
    rhs_beta: float = math.nan
    discrepancy: float = math.nan
    z: float = math.nan
    verdict: str = "error"
    error: str = ""

    COLUMNS = ("kind", "c_or_shape", "n", "s", "r", "u", "v", "psi", "lhs_quad",
               "lhs_mc", "se", "rhs_beta", "discrepancy", "z", "verdict")

    def as_row(self) -> dict:
        d = asdict(self)
        return {k: d[k] for k in self.COLUMNS}

    def as_record(self) -> dict:
        return asdict(self)


def _judge(report: VerificationReport, z_threshold: float) -> None:
    report.discrepancy = report.lhs_quad - report.rhs_beta
    gap = abs(report.lhs_mc - report.rhs_beta)
    # a zero-variance psi (constant) has se == 0; compare against rounding instead
    floor = 1e-12 * max(1.0, abs(report.rhs_beta))
    report.z = gap / report.se if report.se > 0 else (0.0 if gap <= floor else math.inf)
    report.verdict = "violated" if gap > max(z_threshold * report.se, floor) else "consistent"


def verify_query(q: RegressionQuery, N: int, rng: np.random.Generator,
                 z_threshold: float = DEFAULT_Z) -> VerificationReport:
    """Compare quadrature LHS, Monte Carlo LHS and Beta RHS for one query."""
    rep = VerificationReport(q.spec.kind, q.spec.params[0], q.n, q.s, q.r,
                             float(q.u), float(q.v), q.psi.name)
    try:
        rep.lhs_quad = regression_lhs_quadrature(q)
        rep.lhs_mc, rep.se = regression_lhs_monte_carlo(q, N, rng)
        rep.rhs_beta = regression_rhs_beta(q.r, q.s, q.u, q.v, q.psi)
        _judge(rep, z_threshold)
    except (ArithmeticError, ValueError, FloatingPointError) as exc:
        rep.verdict = "error"
        rep.error = f"{type(exc).__name__}: {exc}"
    return rep


def quantile_grid(spec: DistributionSpec, n: int, s: int, r: int, size: int,
                  rng: np.random.Generator | None = None,
                  u_levels: tuple[float, float] = (0.2, 0.6),
                  v_levels: tuple[float, float] = (0.4, 0.95)) -> list[tuple[float, float]]:
    """Conditioning points ``(u, v)`` placed at quantiles of ``R_(n-s)`` and ``R_(n+r)``.

    With ``rng`` the levels are drawn uniformly from the two ranges
    (``size`` pairs); without it a deterministic ``size x size`` lattice of
    levels is used. Pairs with ``u >= v`` are dropped (random mode redraws).
    """
    lo, hi = spec.support

    def pair(pu, pv):
        u = float(record_quantile(spec, n - s, pu))
        v = float(record_quantile(spec, n + r, pv))
        return u, v

    out: list[tuple[float, float]] = []
    if rng is None:
        for pu in np.linspace(*u_levels, size):
            for pv in np.linspace(*v_levels, size):
                u, v = pair(pu, pv)
                if lo <= u < v < hi:
                    out.append((u, v))
        return out
    while len(out) < size:
        u, v = pair(rng.uniform(*u_levels), rng.uniform(*v_levels))
        if lo <= u < v < hi:
            out.append((u, v))
    return out


def verify_proposition(spec: DistributionSpec, index_set: Iterable[tuple[int, int, int]],
                       grid, psis: Sequence, N: int, rng: np.random.Generator | int,
                       z_threshold: float = DEFAULT_Z) -> list[VerificationReport]:
    """Verification reports over every ``(n, s, r) x (u, v) x psi`` combination.

    ``grid`` is either a list of ``(u, v)`` pairs shared by all index tuples,
    or a callable ``grid(n, s, r) -> pairs``. Each query draws from its own
    child seed, spawned in query order, so results do not depend on how the
    work is scheduled. Failures are recorded in the report, not raised.
    """
    seed_seq = _as_seed_sequence(rng)
    psis = [named_psi(p) for p in psis]
    plan = []
    for n, s, r in index_set:
        pairs = grid(n, s, r) if callable(grid) else grid
        for u, v in pairs:
            for psi in psis:
                plan.append((n, s, r, u, v, psi))
    children = seed_seq.spawn(len(plan))
    return [verify_one(spec, n, s, r, u, v, psi, N, child, z_threshold)
            for (n, s, r, u, v, psi), child in zip(plan, children)]


def verify_one(spec: DistributionSpec, n: int, s: int, r: int, u: float, v: float, psi,
               N: int, seed: np.random.SeedSequence | int, z_threshold: float = DEFAULT_Z) -> VerificationReport:
    """One verification report; invalid queries come back as ``verdict == "error"``."""
    psi = named_psi(psi)
    try:
        q = RegressionQuery(spec, n, s, r, u, v, psi)
    except DomainError as exc:
        rep = VerificationReport(spec.kind, spec.params[0], n, s, r, float(u), float(v), psi.name)
        rep.error = f"DomainError: {exc}"
        return rep
    return verify_query(q, N, np.random.default_rng(seed), z_threshold)


def _as_seed_sequence(rng) -> np.random.SeedSequence:
    if isinstance(rng, np.random.SeedSequence):
        return rng
    if isinstance(rng, np.random.Generator):
        return np.random.SeedSequence(int(rng.integers(0, 2**63)))
    return np.random.SeedSequence(int(rng))


def verify_identity_12(gs: Sequence[Polynomial], rs: Iterable[int], ss: Iterable[int],
                       uv_samples: Sequence[tuple[float, float]]) -> float:
    """Largest relative gap between ``E[g^(r+s-1)(B_{r,s}(u,v))]`` and ``M(r-1,s-1)/B(r,s)``.

    The left side is Gauss-Jacobi quadrature in floating point, the right
    side exact divided-difference algebra; the gap is scaled by
    ``max(1, |rhs|)``.
    """
    rs, ss = list(rs), list(ss)
    worst = 0.0
    for g in gs:
        for r in rs:
            for s in ss:
                dg = poly_derivative(g, r + s - 1)
                for u, v in uv_samples:
                    lhs = genbeta_expect(GenBetaParams(r, s, u, v), dg)
                    rhs = float(rhs_prior_characterization(g, r, s, u, v))
                    worst = max(worst, abs(lhs - rhs) / max(1.0, abs(rhs)))
    return worst
