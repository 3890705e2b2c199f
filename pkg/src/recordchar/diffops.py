r"""Exact polynomial algebra and mixed partials of divided differences.

For a test function ``g`` define the divided difference

    D(u, v) = (g(v) - g(u)) / (v - u),          u != v,

and ``M(i, j; u, v) = d^{i+j} D / du^i dv^j``. For a polynomial
``g = sum_k c_k x^k`` the divided difference is itself the bivariate
polynomial ``sum_k c_k sum_{a+b=k-1} u^a v^b``, so every ``M`` value is
obtained by term-wise differentiation, with no numeric differencing.

All arithmetic is in :class:`fractions.Fraction`. Float arguments are
converted exactly (every double is a dyadic rational), so the identity
checks below return residuals that are exactly zero rather than small.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Callable, Iterable, Sequence, Union

import numpy as np

from .errors import DomainError

__all__ = [
    "Polynomial",
    "TestFunction",
    "MQuery",
    "poly_derivative",
    "M_operator",
    "M_numeric",
    "I_integral",
    "check_identity_13",
    "check_identity_17",
    "check_I_recursion",
    "rhs_prior_characterization",
    "beta_function",
]

Number = Union[int, float, Fraction]

DEFAULT_MAX_ORDER = 16


def _frac(x: Number) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    xf = float(x)
    if not math.isfinite(xf):
        raise DomainError(f"non-finite value {x!r}")
    return Fraction(xf)


def _is_exact(*xs: Number) -> bool:
    return all(isinstance(x, (Rational, np.integer)) for x in xs)


def _falling(n: int, k: int) -> int:
    """Falling factorial n (n-1) ... (n-k+1); zero when k > n."""
    return math.perm(n, k) if k <= n else 0


class Polynomial:
    """Univariate polynomial with exact rational coefficients.

    Coefficients are stored in ascending degree order with trailing zeros
    removed. The zero polynomial has ``degree == -inf``.

    Calling the polynomial on an int/Fraction returns an exact Fraction;
    on a float or numpy array it returns floats (Horner in double).
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Number] = ()):
        cs = [_frac(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    @classmethod
    def monomial(cls, k: int, scale: Number = 1) -> Polynomial:
        return cls([0] * k + [scale])

    @property
    def degree(self) -> float:
        return len(self.coeffs) - 1 if self.coeffs else -math.inf

    def __repr__(self) -> str:
        return f"Polynomial({[str(c) for c in self.coeffs]})"

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Polynomial):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == Polynomial([other]).coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __add__(self, other: Polynomial | Number) -> Polynomial:
        o = other if isinstance(other, Polynomial) else Polynomial([other])
        n = max(len(self.coeffs), len(o.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = o.coeffs + (Fraction(0),) * (n - len(o.coeffs))
        return Polynomial(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __neg__(self) -> Polynomial:
        return Polynomial(-c for c in self.coeffs)

    def __sub__(self, other: Polynomial | Number) -> Polynomial:
        o = other if isinstance(other, Polynomial) else Polynomial([other])
        return self + (-o)

    def __rsub__(self, other: Number) -> Polynomial:
        return Polynomial([other]) - self

    def __mul__(self, other: Polynomial | Number) -> Polynomial:
        if not isinstance(other, Polynomial):
            f = _frac(other)
            return Polynomial(c * f for c in self.coeffs)
        if not self.coeffs or not other.coeffs:
            return Polynomial()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Polynomial(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> Polynomial:
        out = Polynomial([1])
        for _ in range(k):
            out = out * self
        return out

    def __call__(self, x):
        if _is_exact(x):
            xf = _frac(x)
            acc = Fraction(0)
            for c in reversed(self.coeffs):
                acc = acc * xf + c
            return acc
        xa = np.asarray(x, dtype=float)
        acc = np.zeros_like(xa)
        for c in reversed(self.coeffs):
            acc = acc * xa + float(c)
        return float(acc) if np.ndim(x) == 0 else acc

    def derivative(self, j: int = 1) -> Polynomial:
        return poly_derivative(self, j)

    def antiderivative(self) -> Polynomial:
        """Antiderivative with zero constant term."""
        return Polynomial([0] + [c / (k + 1) for k, c in enumerate(self.coeffs)])

    def integrate(self, a: Number, b: Number) -> Fraction:
        """Exact definite integral over ``[a, b]``."""
        F = self.antiderivative()
        return F(_frac(b)) - F(_frac(a))

    def to_list(self) -> list[str]:
        return [str(c) for c in self.coeffs]

    @classmethod
    def from_list(cls, coeffs: Sequence[Number | str]) -> Polynomial:
        return cls(Fraction(c) if isinstance(c, str) else c for c in coeffs)


@dataclass(frozen=True)
class TestFunction:
    """A function ``psi`` with (optionally) known derivatives.

    Wraps either an exact :class:`Polynomial` (all derivatives available) or
    an opaque vectorized callable with an explicit derivative chain
    ``derivatives[k-1] == psi^{(k)}``; ``max_order`` is the highest
    derivative the opaque form can supply.
    """

    __test__ = False  # not a pytest class

    func: Callable | Polynomial
    name: str = "psi"
    derivatives: tuple[Callable, ...] = ()

    @classmethod
    def polynomial(cls, g: Polynomial, name: str | None = None) -> TestFunction:
        return cls(g, name or f"poly{g.to_list()}")

    @classmethod
    def opaque(cls, func: Callable, name: str = "psi",
               derivatives: Sequence[Callable] = ()) -> TestFunction:
        return cls(func, name, tuple(derivatives))

    @property
    def is_polynomial(self) -> bool:
        return isinstance(self.func, Polynomial)

    @property
    def max_order(self) -> float:
        return math.inf if self.is_polynomial else len(self.derivatives)

    def __call__(self, x):
        return self.func(x)

    def derivative(self, j: int) -> TestFunction:
        if self.is_polynomial:
            return TestFunction(self.func.derivative(j), f"{self.name}^({j})")
        if j == 0:
            return self
        if j > self.max_order:
            raise DomainError(f"{self.name} declares derivatives only up to order {self.max_order}")
        return TestFunction(self.derivatives[j - 1], f"{self.name}^({j})", self.derivatives[j:])


def as_test_function(psi) -> TestFunction:
    if isinstance(psi, TestFunction):
        return psi
    if isinstance(psi, Polynomial):
        return TestFunction.polynomial(psi)
    if callable(psi):
        return TestFunction.opaque(psi, getattr(psi, "__name__", "psi"))
    raise TypeError(f"cannot use {psi!r} as a test function")


def poly_derivative(g: Polynomial, j: int) -> Polynomial:
    """Exact ``j``-th derivative of ``g``."""
    if j < 0:
        raise DomainError(f"derivative order must be non-negative, got {j}")
    return Polynomial(_falling(k, j) * c for k, c in enumerate(g.coeffs) if k >= j)


@dataclass(frozen=True)
class MQuery:
    """Orders ``i`` (in ``u``) and ``j`` (in ``v``) at the point ``(u, v)``."""

    i: int
    j: int
    u: Number
    v: Number
    max_order: int = DEFAULT_MAX_ORDER

    def __post_init__(self) -> None:
        if self.i < 0 or self.j < 0:
            raise DomainError(f"derivative orders must be non-negative, got ({self.i}, {self.j})")
        if self.i + self.j > self.max_order:
            raise DomainError(f"total order {self.i + self.j} exceeds maximum {self.max_order}")
        if _frac(self.u) == _frac(self.v):
            raise DomainError("divided difference needs u != v")


def _M_exact(g: Polynomial, i: int, j: int, u: Fraction, v: Fraction) -> Fraction:
    total = Fraction(0)
    for k, c in enumerate(g.coeffs):
        if k == 0 or c == 0:
            continue
        # D contributes c * u^a v^b for every a + b = k - 1.
        for a in range(i, k - j):
            b = k - 1 - a
            total += c * _falling(a, i) * _falling(b, j) * u ** (a - i) * v ** (b - j)
    return total


def M_operator(g: Polynomial, q: MQuery) -> Fraction | float:
    """Exact mixed partial of the divided difference of ``g``.

    Returns a Fraction when ``u`` and ``v`` are rational (int/Fraction),
    otherwise the exact value rounded once to float.
    """
    val = _M_exact(g, q.i, q.j, _frac(q.u), _frac(q.v))
    return val if _is_exact(q.u, q.v) else float(val)


def _central_weights(order: int) -> list[tuple[float, int]]:
    # Offsets (in steps) and weights of the order-th central difference,
    # error O(h^2).
    if order == 0:
        return [(0.0, 1)]
    return [(order / 2 - k, (-1) ** k * math.comb(order, k)) for k in range(order + 1)]


def M_numeric(psi, q: MQuery, h: float = 1e-2) -> float:
    """Finite-difference estimate of ``M(i, j; u, v)`` for any smooth ``psi``.

    Central differences of order ``i`` in ``u`` and ``j`` in ``v`` with one
    Richardson level, so the truncation error is O(h^4) per direction.
    Total order is capped at 4.
    """
    if q.i + q.j > 4:
        raise DomainError(f"M_numeric supports total order <= 4, got {q.i + q.j}")
    f = as_test_function(psi)
    u, v = float(q.u), float(q.v)
    if max(q.i, q.j) * h >= abs(v - u):
        raise DomainError("step too large: stencil would cross the diagonal u = v")

    def D(uu, vv):
        return (f(vv) - f(uu)) / (vv - uu)

    def stencil(step: float) -> float:
        acc = 0.0
        for du, wu in _central_weights(q.i):
            for dv, wv in _central_weights(q.j):
                acc += wu * wv * D(u + du * step, v + dv * step)
        return acc / step ** (q.i + q.j)

    if q.i + q.j == 0:
        return float(D(u, v))
    coarse, fine = stencil(h), stencil(h / 2)
    return float((4 * fine - coarse) / 3)


def _integrand(g: Polynomial, j: int, s: int, u: Fraction, v: Fraction) -> Polynomial:
    # g^{(s+j-1)}(t) (t-u)^{s-1} (v-t)^{j-1}
    left = Polynomial([-u, 1]) ** (s - 1)
    right = Polynomial([v, -1]) ** (j - 1)
    return poly_derivative(g, s + j - 1) * left * right


def I_integral(g: Polynomial, j: int, s: int, u: Number, v: Number) -> Fraction | float:
    """``int_u^v g^{(s+j-1)}(t) (t-u)^{s-1} (v-t)^{j-1} dt`` by exact antidifferentiation."""
    if j < 1 or s < 1:
        raise DomainError(f"I(j, s) needs j, s >= 1, got ({j}, {s})")
    uf, vf = _frac(u), _frac(v)
    if uf >= vf:
        raise DomainError("I(j, s) needs u < v")
    val = _integrand(g, j, s, uf, vf).integrate(uf, vf)
    return val if _is_exact(u, v) else float(val)


def _check_uv(u: Number, v: Number) -> tuple[Fraction, Fraction]:
    uf, vf = _frac(u), _frac(v)
    if uf >= vf:
        raise DomainError("identity checks need u < v")
    return uf, vf


def check_identity_13(g: Polynomial, j: int, u: Number, v: Number) -> Fraction:
    """Residual of ``g^{(j)}(v) = (v-u) M(0,j) + j M(0,j-1)``; exactly 0."""
    if j < 1:
        raise DomainError("identity needs j >= 1")
    uf, vf = _check_uv(u, v)
    lhs = poly_derivative(g, j)(vf)
    rhs = (vf - uf) * _M_exact(g, 0, j, uf, vf) + j * _M_exact(g, 0, j - 1, uf, vf)
    return lhs - rhs


def check_identity_17(g: Polynomial, i: int, j: int, u: Number, v: Number) -> Fraction:
    """Residual of ``i M(i-1,j) = (v-u) M(i,j) + j M(i,j-1)``; exactly 0."""
    if i < 1 or j < 1:
        raise DomainError("identity needs i, j >= 1")
    uf, vf = _check_uv(u, v)
    lhs = i * _M_exact(g, i - 1, j, uf, vf)
    rhs = (vf - uf) * _M_exact(g, i, j, uf, vf) + j * _M_exact(g, i, j - 1, uf, vf)
    return lhs - rhs


def check_I_recursion(g: Polynomial, j: int, s: int, u: Number, v: Number) -> Fraction:
    """Residual of the by-parts step ``I(j+1,s) = j I(j,s) - (s-1) I(j+1,s-1)``."""
    if j < 1 or s < 2:
        raise DomainError("recursion needs j >= 1 and s >= 2")
    uf, vf = _check_uv(u, v)
    lhs = I_integral(g, j + 1, s, uf, vf)
    rhs = j * I_integral(g, j, s, uf, vf) - (s - 1) * I_integral(g, j + 1, s - 1, uf, vf)
    return lhs - rhs


def beta_function(r: int, s: int) -> Fraction:
    """``B(r, s) = (r-1)! (s-1)! / (r+s-1)!`` for positive integers."""
    if r < 1 or s < 1:
        raise DomainError("integer Beta function needs r, s >= 1")
    return Fraction(math.factorial(r - 1) * math.factorial(s - 1), math.factorial(r + s - 1))


def rhs_prior_characterization(g: Polynomial, r: int, s: int, u: Number, v: Number) -> Fraction | float:
    """``M(r-1, s-1; u, v) / B(r, s)`` for integer ``r, s >= 1``."""
    uf, vf = _check_uv(u, v)
    val = _M_exact(g, r - 1, s - 1, uf, vf) / beta_function(r, s)
    return val if _is_exact(u, v) else float(val)
