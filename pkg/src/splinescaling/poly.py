"""
Exact rational polynomials in x and the Chebyshev bridge to cosine series.

A polynomial is stored as a tuple of ``Fraction`` coefficients in ascending
powers of x.  Under the substitution x = cos(t), t = xi/2, a polynomial of
degree m is the same object as a cosine series sum_k c_k cos(k t) of length
m + 1; ``cosine_to_poly`` and ``poly_to_cosine`` convert between the two
exactly.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from numbers import Rational
from typing import Iterable, Sequence

import numpy as np


def _as_coeff(c):
    # ints and Fractions stay exact; floats are accepted for the real-valued variant
    if isinstance(c, Rational):
        return Fraction(c)
    return c


def _trim(coeffs: Sequence) -> tuple:
    end = len(coeffs)
    while end > 0 and coeffs[end - 1] == 0:
        end -= 1
    return tuple(coeffs[:end])


@dataclass(frozen=True, init=False)
class RationalPoly:
    """
    Univariate polynomial with exact coefficients, lowest power first.

    The zero polynomial has an empty coefficient tuple and degree -1.

    >>> RationalPoly([4, Fraction(-9, 2), Fraction(3, 2)])
    RationalPoly('4 - 9/2 x + 3/2 x^2')
    """

    coeffs: tuple

    def __init__(self, coeffs: Iterable = ()):
        object.__setattr__(self, "coeffs", _trim([_as_coeff(c) for c in coeffs]))

    @classmethod
    def constant(cls, c) -> "RationalPoly":
        return cls([c])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self):
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __getitem__(self, k: int):
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return Fraction(0)

    def __add__(self, other):
        return poly_add(self, _lift(other))

    __radd__ = __add__

    def __neg__(self):
        return RationalPoly([-c for c in self.coeffs])

    def __sub__(self, other):
        return poly_add(self, -_lift(other))

    def __rsub__(self, other):
        return poly_add(_lift(other), -self)

    def __mul__(self, other):
        return poly_mul(self, _lift(other))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not polynomials")
        result, base = RationalPoly([1]), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __divmod__(self, other):
        return poly_divmod(self, _lift(other))

    def __call__(self, x):
        return poly_eval(self, x)

    def to_floats(self) -> np.ndarray:
        return np.array([float(c) for c in self.coeffs], dtype=float)

    def __str__(self) -> str:
        return format_poly(self)

    def __repr__(self) -> str:
        return f"RationalPoly('{format_poly(self)}')"


def _lift(p) -> RationalPoly:
    if isinstance(p, RationalPoly):
        return p
    return RationalPoly([p])


def poly_add(p: RationalPoly, q: RationalPoly) -> RationalPoly:
    n = max(len(p.coeffs), len(q.coeffs))
    return RationalPoly([p[k] + q[k] for k in range(n)])


def poly_mul(p: RationalPoly, q: RationalPoly) -> RationalPoly:
    if p.is_zero() or q.is_zero():
        return RationalPoly()
    out = [Fraction(0)] * (len(p.coeffs) + len(q.coeffs) - 1)
    for i, a in enumerate(p.coeffs):
        if a == 0:
            continue
        for j, b in enumerate(q.coeffs):
            out[i + j] += a * b
    return RationalPoly(out)


def poly_divmod(p: RationalPoly, q: RationalPoly) -> tuple[RationalPoly, RationalPoly]:
    """Euclidean division p = quot * q + rem with deg rem < deg q."""
    if q.is_zero():
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(p.coeffs)
    dq = q.degree
    lead = q.leading
    quot = [Fraction(0)] * max(len(rem) - dq, 0)
    for k in range(len(rem) - 1, dq - 1, -1):
        c = rem[k] / lead
        if c == 0:
            continue
        quot[k - dq] = c
        for j, b in enumerate(q.coeffs):
            rem[k - dq + j] -= c * b
    return RationalPoly(quot), RationalPoly(rem[:dq] if dq > 0 else [])


def poly_eval(p: RationalPoly, x):
    """
    Horner evaluation.

    A float ``x`` (or numpy array) gives a floating-point result; an int or
    Fraction ``x`` gives an exact Fraction.
    """
    if isinstance(x, Rational):
        acc = Fraction(0)
        for c in reversed(p.coeffs):
            acc = acc * x + c
        return acc
    acc = np.zeros_like(np.asarray(x, dtype=float))
    for c in reversed(p.coeffs):
        acc = acc * x + float(c)
    return acc if acc.ndim else float(acc)


def poly_reflect(p: RationalPoly) -> RationalPoly:
    """Return p(-x)."""
    return RationalPoly([-c if k % 2 else c for k, c in enumerate(p.coeffs)])


def format_poly(p: RationalPoly, var: str = "x") -> str:
    if p.is_zero():
        return "0"
    terms = []
    for k, c in enumerate(p.coeffs):
        if c == 0:
            continue
        mag = abs(c)
        if k == 0:
            body = str(mag)
        else:
            power = var if k == 1 else f"{var}^{k}"
            body = power if mag == 1 else f"{mag} {power}"
        sign = "-" if c < 0 else "+"
        if not terms:
            terms.append(body if sign == "+" else f"-{body}")
        else:
            terms.append(f"{sign} {body}")
    return " ".join(terms)


@dataclass(frozen=True, init=False)
class CosineSeries:
    """Coefficients c_0..c_m of sum_k c_k cos(k xi / 2)."""

    coeffs: tuple

    def __init__(self, coeffs: Iterable = ()):
        object.__setattr__(self, "coeffs", tuple(_as_coeff(c) for c in coeffs))

    def __len__(self) -> int:
        return len(self.coeffs)

    def __call__(self, xi):
        """Evaluate at the angle ``xi`` (scalar or array)."""
        xi = np.asarray(xi, dtype=float)
        acc = np.zeros_like(xi)
        for k, c in enumerate(self.coeffs):
            acc = acc + float(c) * np.cos(k * xi / 2)
        return acc if acc.ndim else float(acc)


def autocorrelation_series(a: Sequence[float]) -> CosineSeries:
    """
    Cosine series of |sum_k a_k z^k|^2 on z = exp(-i xi/2).

    c_0 = sum a_i^2 and c_k = 2 sum_i a_i a_{i+k}.
    """
    a = list(a)
    n = len(a)
    out = []
    for k in range(n):
        s = sum(a[i] * a[i + k] for i in range(n - k))
        out.append(s if k == 0 else 2 * s)
    return CosineSeries(out)


def cosine_to_poly(s: CosineSeries) -> RationalPoly:
    """Sum c_k T_k(x), with T_k built by T_{k+1} = 2x T_k - T_{k-1}."""
    x2 = RationalPoly([0, 2])
    t_prev, t_cur = RationalPoly([1]), RationalPoly([0, 1])
    acc = RationalPoly()
    for k, c in enumerate(s.coeffs):
        if k == 0:
            t = t_prev
        elif k == 1:
            t = t_cur
        else:
            t_prev, t_cur = t_cur, x2 * t_cur - t_prev
            t = t_cur
        acc = acc + RationalPoly([c * tk for tk in t.coeffs])
    return acc


def poly_to_cosine(p: RationalPoly) -> CosineSeries:
    """
    Chebyshev coefficients of p, so that p(cos t) = sum_k c_k cos(k t).

    Horner's scheme carried out in the Chebyshev basis, using
    x T_0 = T_1 and x T_k = (T_{k+1} + T_{k-1}) / 2.
    """
    if p.is_zero():
        return CosineSeries([Fraction(0)])
    half = Fraction(1, 2)
    acc: list = []
    for c in reversed(p.coeffs):
        # acc <- x * acc
        shifted = [Fraction(0)] * (len(acc) + 1)
        for k, v in enumerate(acc):
            if k == 0:
                shifted[1] += v
            else:
                shifted[k + 1] += half * v
                shifted[k - 1] += half * v
        shifted[0] += c
        acc = shifted
    return CosineSeries(acc)


def to_bernstein(p: RationalPoly, degree: int | None = None) -> tuple[Fraction, ...]:
    """
    Exact Bernstein coefficients of p on [-1, 1].

    p(x) = sum_i b_i C(m, i) u^i (1 - u)^(m - i) with u = (1 + x) / 2.
    """
    m = max(p.degree, 0) if degree is None else degree
    if m < p.degree:
        raise ValueError("Bernstein degree below polynomial degree")
    # substitute x = 2u - 1
    x_of_u = RationalPoly([-1, 2])
    d = RationalPoly()
    for c in reversed(p.coeffs):
        d = d * x_of_u + c
    return tuple(
        sum((Fraction(comb(i, j), comb(m, j)) * d[j] for j in range(i + 1)), Fraction(0))
        for i in range(m + 1)
    )


def bernstein_eval(b: Sequence, x):
    """De Casteljau evaluation of Bernstein coefficients on [-1, 1] in floating point."""
    x = np.asarray(x, dtype=float)
    u = (1 + x) / 2
    w = 1 - u
    beta = [np.full_like(x, float(c)) for c in b]
    for r in range(1, len(beta)):
        for i in range(len(beta) - r):
            beta[i] = w * beta[i] + u * beta[i + 1]
    out = beta[0] if beta else np.zeros_like(x)
    return out if out.ndim else float(out)
