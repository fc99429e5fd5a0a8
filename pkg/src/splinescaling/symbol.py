"""B-spline masks, the Lorentz polynomial Q_n and its Euclidean-algorithm oracle."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import comb

import numpy as np

from .poly import RationalPoly, bernstein_eval, poly_eval, poly_reflect, to_bernstein

MAX_ORDER = 64

HALF_PLUS = RationalPoly([Fraction(1, 2), Fraction(1, 2)])  # (1 + x) / 2
HALF_MINUS = RationalPoly([Fraction(1, 2), Fraction(-1, 2)])  # (1 - x) / 2


def check_order(n: int) -> int:
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)):
        raise TypeError(f"order must be an integer, got {n!r}")
    if not 1 <= n <= MAX_ORDER:
        raise ValueError(f"order must lie in [1, {MAX_ORDER}], got {n}")
    return int(n)


@dataclass(frozen=True)
class BsplineMask:
    """Coefficients of ((1 + z)/2)^n in ascending powers of z."""

    n: int
    coeffs: tuple[Fraction, ...]


@dataclass(frozen=True)
class QPolynomial:
    """
    Q_n as an exact polynomial in x.

    Floating-point evaluation goes through the Bernstein form on [-1, 1]:
    the monomial coefficients of Q_n alternate in sign and grow like
    C(2n-1, n-1), so Horner loses about 1e-9 by n = 16.
    """

    n: int
    poly: RationalPoly

    @cached_property
    def bernstein(self) -> tuple[Fraction, ...]:
        return to_bernstein(self.poly, self.n - 1)

    def __call__(self, x):
        if isinstance(x, (int, Fraction)):
            return poly_eval(self.poly, x)
        return bernstein_eval(self.bernstein, x)


def bspline_mask(n: int) -> BsplineMask:
    n = check_order(n)
    scale = Fraction(1, 2**n)
    return BsplineMask(n, tuple(comb(n, j) * scale for j in range(n + 1)))


def lorentz_q(n: int) -> QPolynomial:
    """
    Q_n(x) = sum_{i<n} C(2n-1, i) ((1+x)/2)^(n-1-i) ((1-x)/2)^i, exactly.
    """
    n = check_order(n)
    plus = [HALF_PLUS**k for k in range(n)]
    minus = [HALF_MINUS**k for k in range(n)]
    q = RationalPoly()
    for i in range(n):
        q = q + comb(2 * n - 1, i) * (plus[n - 1 - i] * minus[i])
    return QPolynomial(n, q)


def extended_euclid(a: RationalPoly, b: RationalPoly) -> tuple[RationalPoly, RationalPoly, RationalPoly]:
    """
    Return (g, s, t) with a*s + b*t = g and g = gcd(a, b) monic.

    Remainders are normalised to be monic at every step.
    """
    if a.is_zero() or b.is_zero():
        raise ValueError("extended_euclid needs two nonzero polynomials")
    r0, s0, t0 = a * (1 / a.leading), RationalPoly([1 / a.leading]), RationalPoly()
    r1, s1, t1 = b * (1 / b.leading), RationalPoly(), RationalPoly([1 / b.leading])
    while not r1.is_zero():
        quot, rem = divmod(r0, r1)
        s2, t2 = s0 - quot * s1, t0 - quot * t1
        if not rem.is_zero():
            lc = 1 / rem.leading
            rem, s2, t2 = rem * lc, s2 * lc, t2 * lc
        r0, s0, t0, r1, s1, t1 = r1, s1, t1, rem, s2, t2
    return r0, s0, t0


def eea_q(n: int) -> tuple[QPolynomial, RationalPoly]:
    """
    Solve ((1+x)/2)^n s + ((1-x)/2)^n t = 1 by the extended Euclidean algorithm.

    Independent of :func:`lorentz_q`; uniqueness of the Bezout pair makes the
    two constructions agree exactly.
    """
    n = check_order(n)
    a, b = HALF_PLUS**n, HALF_MINUS**n
    g, s, t = extended_euclid(a, b)
    assert g.degree == 0, f"gcd of the B-spline factors is not a unit: {g}"
    s, t = s * (1 / g[0]), t * (1 / g[0])
    assert s.degree < n and t.degree < n
    return QPolynomial(n, s), t


def bezout_identity(q: QPolynomial) -> RationalPoly:
    """((1+x)/2)^n Q(x) + ((1-x)/2)^n Q(-x), exactly; equals 1 for valid Q."""
    n = q.n
    return HALF_PLUS**n * q.poly + HALF_MINUS**n * poly_reflect(q.poly)


def bezout_residual(q: QPolynomial, grid_size: int = 1001) -> float:
    """Max floating-point deviation of the Bezout identity on an equispaced grid of [-1, 1]."""
    if grid_size < 2:
        raise ValueError("grid_size must be at least 2")
    x = np.linspace(-1.0, 1.0, grid_size)
    n = q.n
    lhs = ((1 + x) / 2) ** n * q(x) + ((1 - x) / 2) ** n * q(-x)
    return float(np.max(np.abs(lhs - 1.0)))
