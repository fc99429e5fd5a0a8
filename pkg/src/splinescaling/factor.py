"""
Spectral factorisation of Q_n into S_n(z) = a_1 z + ... + a_n z^n.

Q_n(cos(xi/2)) is rewritten as a Laurent polynomial L(z) on z = exp(-i xi/2).
The roots of z^(n-1) L(z) come in reciprocal pairs (r, 1/r); picking one root
from every pair, consistently across complex-conjugate pairs, and normalising
the product to S_n(1) = 1 gives one real solution a_1..a_n.
"""
from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence, Union

import mpmath
import numpy as np

from .poly import poly_to_cosine
from .symbol import QPolynomial

RECIPROCAL_RTOL = 1e-6
CONJUGATE_TOL = 1e-9
ROOT_BACKWARD_TOL = 1e-11
RELIABLE_MAX_ORDER = 16

# Orders whose printed solution uses the inner roots; every other order uses
# the outer (|r| > 1) roots, which is what the printed n = 2 and n = 4 tables show.
REFERENCE_INNER_ORDERS = frozenset({3})


class FactorizationError(RuntimeError):
    pass


class ConvergenceFailure(FactorizationError):
    pass


class PairingFailure(FactorizationError):
    pass


class BranchInvalid(ValueError):
    pass


@dataclass(frozen=True)
class LaurentSymbol:
    """
    L(z) = c_0 + sum_{k>=1} c_k (z^k + z^-k) / 2, so that L(exp(-i xi/2)) = Q_n(cos(xi/2)).

    ``exact`` keeps the rational cosine coefficients; ``coeffs`` are their floats.
    """

    n: int
    coeffs: tuple[float, ...]
    exact: tuple[Fraction, ...] = ()

    def polynomial(self) -> np.ndarray:
        """Ascending coefficients of z^(n-1) L(z), degree 2(n-1)."""
        m = self.n - 1
        out = np.zeros(2 * m + 1)
        out[m] = self.coeffs[0]
        for k in range(1, self.n):
            out[m + k] = out[m - k] = self.coeffs[k] / 2
        return out

    def __call__(self, xi):
        xi = np.asarray(xi, dtype=float)
        acc = np.zeros_like(xi)
        for k, c in enumerate(self.coeffs):
            acc = acc + c * np.cos(k * xi / 2)
        return acc


@dataclass(frozen=True)
class RootSet:
    """
    Roots of z^(n-1) L(z) organised for branch selection.

    ``pairs[j]`` is ``(outer, inner)`` with |outer| > 1 and inner ~ 1/outer.
    ``groups`` lists the pair indices that must be chosen together: a real
    pair stands alone, a complex pair is grouped with its conjugate.
    """

    roots: tuple[complex, ...]
    pairs: tuple[tuple[complex, complex], ...]
    groups: tuple[tuple[int, ...], ...]
    # the same pairs at the extended working precision
    pairs_fine: tuple = field(default=(), repr=False, compare=False)
    dps: int = field(default=15, repr=False, compare=False)


@dataclass(frozen=True)
class FactorSolution:
    n: int
    a: tuple[float, ...]
    branch: tuple[int, ...]
    roots_selected: tuple[complex, ...] = field(repr=False)
    sign: int = 1
    # a at the working precision of the root refinement, when available
    a_fine: tuple = field(default=(), repr=False, compare=False)
    dps: int = field(default=15, repr=False, compare=False)

    @property
    def sum_a(self) -> float:
        return float(np.sum(self.a))

    @property
    def sum_a_sq(self) -> float:
        return float(np.dot(self.a, self.a))

    def symbol(self, xi) -> np.ndarray:
        """S_n(exp(-i xi/2))."""
        z = np.exp(-0.5j * np.asarray(xi, dtype=float))
        return sum(ak * z ** (k + 1) for k, ak in enumerate(self.a))


def laurent_symbol(q: QPolynomial) -> LaurentSymbol:
    series = poly_to_cosine(q.poly)
    exact = tuple(series.coeffs) + (Fraction(0),) * (q.n - len(series))
    return LaurentSymbol(q.n, tuple(float(c) for c in exact), exact)


def aberth_roots(coeffs: Sequence[complex], tol: float = 1e-13, max_iter: int = 500) -> np.ndarray:
    """
    All roots of sum_k coeffs[k] z^k by Aberth-Ehrlich simultaneous iteration.

    Starts on a circle whose radius is the geometric mean root modulus,
    rotated off the real axis.  Stops when every correction is below
    ``tol`` relative to the root it updates.
    """
    c = np.trim_zeros(np.asarray(coeffs, dtype=complex), "b")
    deg = len(c) - 1
    if deg < 1:
        return np.zeros(0, dtype=complex)
    if c[0] == 0:
        raise ValueError("polynomial has a root at zero; deflate first")
    c = c / c[-1]
    dc = c[1:] * np.arange(1, deg + 1)
    radius = abs(c[0]) ** (1.0 / deg)
    z = radius * np.exp(1j * (2 * np.pi * np.arange(deg) / deg + 0.4))

    def horner(coef, x):
        acc = np.zeros_like(x)
        for ck in coef[::-1]:
            acc = acc * x + ck
        return acc

    abs_c = np.abs(c)
    active = np.ones(deg, dtype=bool)
    for _ in range(max_iter):
        zi = z[active]
        ratio = horner(c, zi) / horner(dc, zi)
        diff = zi[:, None] - z[None, :]
        diff[diff == 0] = np.inf  # self term
        w = ratio / (1.0 - ratio * (1.0 / diff).sum(axis=1))
        z[active] = zi - w
        # a root is done when its step is negligible or p(z) is at rounding level
        small_step = np.abs(w) <= tol * np.maximum(1.0, np.abs(zi))
        at_noise = np.abs(horner(c, z[active])) <= 4 * deg * np.finfo(float).eps * horner(abs_c, np.abs(z[active]))
        idx = np.flatnonzero(active)
        active[idx[small_step | at_noise]] = False
        if not active.any():
            return z
    raise ConvergenceFailure(f"Aberth iteration did not converge in {max_iter} steps (degree {deg})")


def backward_error(coeffs: Sequence[float], roots: np.ndarray) -> float:
    """Max over roots of |p(r)| / sum_k |c_k| |r|^k."""
    c = np.asarray(coeffs, dtype=complex)
    worst = 0.0
    for r in roots:
        powers = r ** np.arange(len(c))
        worst = max(worst, abs(np.dot(c, powers)) / np.dot(np.abs(c), np.abs(powers)))
    return worst


def _working_dps(n: int) -> int:
    # Q_n coefficients grow like C(2n-1, n-1); carry enough guard digits for that
    return 40 + 2 * n


def refine_roots(coeffs: Sequence, roots: Sequence[complex], dps: int, max_iter: int = 200) -> list:
    """
    Continue Aberth-Ehrlich iteration in ``dps``-digit arithmetic.

    ``coeffs`` may be exact (Fractions) or floats.  Double-precision roots
    of the symbol polynomial carry errors near 1e-7 by n = 13 because its
    inner roots cluster; this pass restores full accuracy before rounding.
    """
    with mpmath.workdps(dps):
        c = [mpmath.mpf(x.numerator) / x.denominator if isinstance(x, Fraction) else mpmath.mpf(x) for x in coeffs]
        z = [mpmath.mpc(r) for r in roots]
        tol = mpmath.mpf(10) ** -30
        deg = len(c) - 1
        for _ in range(max_iter):
            biggest = mpmath.mpf(0)
            for i in range(deg):
                pv = c[-1]
                dv = mpmath.mpf(0)
                for ck in c[-2::-1]:
                    dv = dv * z[i] + pv
                    pv = pv * z[i] + ck
                ratio = pv / dv
                rep = mpmath.fsum(1 / (z[i] - z[j]) for j in range(deg) if j != i)
                w = ratio / (1 - ratio * rep)
                z[i] -= w
                biggest = max(biggest, abs(w) / max(1, abs(z[i])))
            if biggest <= tol:
                return z
    raise ConvergenceFailure(f"extended-precision refinement did not converge in {max_iter} steps")


def symbol_roots(L: LaurentSymbol) -> RootSet:
    if L.n == 1:
        return RootSet((), (), ())
    poly = L.polynomial()
    roots = aberth_roots(poly)
    err = backward_error(poly, roots)
    if err > ROOT_BACKWARD_TOL:
        raise ConvergenceFailure(f"root backward error {err:.3g} exceeds {ROOT_BACKWARD_TOL:g}")
    dps = _working_dps(L.n)
    if L.exact:
        m = L.n - 1
        exact = [Fraction(0)] * (2 * m + 1)
        exact[m] = L.exact[0]
        for k in range(1, L.n):
            exact[m + k] = exact[m - k] = L.exact[k] / 2
    else:
        exact = list(poly)
    fine = refine_roots(exact, roots, dps)

    with mpmath.workdps(dps):
        if any(abs(mpmath.log(abs(r))) <= 1e-8 for r in fine):
            raise PairingFailure("symbol has a root on the unit circle")
        outer = [r for r in fine if abs(r) > 1]
        inner = [r for r in fine if abs(r) < 1]
        if len(outer) != len(inner):
            raise PairingFailure(f"{len(outer)} roots outside the unit circle but {len(inner)} inside")

        # enforce exact conjugate symmetry on the outer half
        cleaned = []
        pending = list(outer)
        while pending:
            r = pending.pop(0)
            if abs(r.imag) <= CONJUGATE_TOL * max(1, abs(r)):
                cleaned.append((mpmath.mpc(r.real, 0), len(cleaned)))
                continue
            dists = [abs(t - mpmath.conj(r)) for t in pending]
            j = int(np.argmin([float(d) for d in dists])) if pending else -1
            if j < 0 or dists[j] > RECIPROCAL_RTOL * abs(r):
                raise PairingFailure(f"no conjugate partner for root {complex(r)}")
            partner = pending.pop(j)
            mid = (r + mpmath.conj(partner)) / 2
            tag = len(cleaned)
            cleaned.extend([(mpmath.mpc(mid.real, abs(mid.imag)), tag), (mpmath.mpc(mid.real, -abs(mid.imag)), tag)])

        pairs = []
        remaining = list(inner)
        for r, tag in cleaned:
            target = 1 / r
            dists = [abs(t - target) for t in remaining]
            j = int(np.argmin([float(d) for d in dists]))
            if dists[j] > RECIPROCAL_RTOL * abs(target):
                raise PairingFailure(f"no reciprocal partner for root {complex(r)}")
            remaining.pop(j)
            # inner partner taken as the exact reciprocal so the pair is symmetric
            pairs.append((r, target, tag))

    pairs.sort(key=lambda pr: (-float(abs(pr[0])), -float(pr[0].imag)))
    members: dict[int, list[int]] = {}
    for i, (_, _, tag) in enumerate(pairs):
        members.setdefault(tag, []).append(i)
    groups = sorted(tuple(v) for v in members.values())
    pairs = [(o, t) for o, t, _ in pairs]
    return RootSet(
        tuple(complex(r) for r in roots),
        tuple((complex(o), complex(t)) for o, t in pairs),
        tuple(groups),
        tuple(pairs),
        dps,
    )


BranchSpec = Union[str, Sequence[int]]


def group_bits_to_branch(rs: RootSet, bits: Sequence[int]) -> tuple[int, ...]:
    branch = [0] * len(rs.pairs)
    for g, b in zip(rs.groups, bits):
        for i in g:
            branch[i] = int(b)
    return tuple(branch)


def enumerate_branches(rs: RootSet) -> list[tuple[int, ...]]:
    """Every conjugation-closed selection, lexicographic over group bits (0 = outer root)."""
    return [group_bits_to_branch(rs, bits) for bits in itertools.product((0, 1), repeat=len(rs.groups))]


def resolve_branch(n: int, rs: RootSet, branch: BranchSpec) -> tuple[int, ...]:
    """
    Turn a branch spec into per-pair choice bits.

    Accepted specs: ``"paper"``, ``"outer"``, ``"inner"``, ``"index:<k>"``
    (position in :func:`enumerate_branches`), or an explicit bit sequence
    with one entry per reciprocal pair.
    """
    npairs = len(rs.pairs)
    if isinstance(branch, str):
        if branch == "paper":
            branch = "inner" if n in REFERENCE_INNER_ORDERS else "outer"
        if branch == "outer":
            return (0,) * npairs
        if branch == "inner":
            return (1,) * npairs
        if branch.startswith("index:"):
            try:
                k = int(branch.split(":", 1)[1])
            except ValueError:
                raise BranchInvalid(f"bad branch index in {branch!r}") from None
            options = enumerate_branches(rs)
            if not 0 <= k < len(options):
                raise BranchInvalid(f"branch index {k} out of range [0, {len(options)})")
            return options[k]
        raise BranchInvalid(f"unknown branch {branch!r}")
    bits = tuple(int(b) for b in branch)
    if len(bits) != npairs or any(b not in (0, 1) for b in bits):
        raise BranchInvalid(f"branch needs {npairs} bits in {{0, 1}}, got {bits}")
    for g in rs.groups:
        if len({bits[i] for i in g}) > 1:
            raise BranchInvalid(f"branch {bits} splits a conjugate pair; coefficients would be complex")
    return bits


def _factor_from_bits(L: LaurentSymbol, rs: RootSet, bits: tuple[int, ...]) -> FactorSolution:
    with mpmath.workdps(rs.dps):
        fine = rs.pairs_fine or tuple((mpmath.mpc(o), mpmath.mpc(t)) for o, t in rs.pairs)
        selected = [fine[i][b] for i, b in enumerate(bits)]
        # ascending coefficients of prod (z - r)
        coef = [mpmath.mpc(1)]
        for r in selected:
            coef = [(coef[k - 1] if k > 0 else 0) - r * (coef[k] if k < len(coef) else 0) for k in range(len(coef) + 1)]
        # S_n(1) as a product avoids the cancellation in summing the coefficients
        at_one = mpmath.fprod(1 - r for r in selected) if selected else mpmath.mpc(1)
        a = [x / at_one for x in coef]
        scale = max(abs(x) for x in a)
        if max(abs(x.imag) for x in a) > 1e-9 * scale:
            raise BranchInvalid("selected roots are not closed under conjugation")
        a_fine = tuple(x.real for x in a)
    return FactorSolution(
        L.n, tuple(float(x) for x in a_fine), bits, tuple(complex(r) for r in selected), 1, a_fine, rs.dps
    )


def spectral_factor(L: LaurentSymbol, branch: BranchSpec = "paper", roots: RootSet | None = None) -> FactorSolution:
    if L.n > RELIABLE_MAX_ORDER:
        warnings.warn(
            f"order {L.n} exceeds {RELIABLE_MAX_ORDER}; double-precision factorisation is not validated there",
            RuntimeWarning,
            stacklevel=2,
        )
    rs = symbol_roots(L) if roots is None else roots
    return _factor_from_bits(L, rs, resolve_branch(L.n, rs, branch))


def enumerate_solutions(L: LaurentSymbol, include_sign_flips: bool = False) -> list[FactorSolution]:
    """
    Every real factor S_n with |S_n|^2 = L.

    By default only the S_n(1) = +1 family is returned (2^g members for g
    conjugate groups).  With ``include_sign_flips`` the negated copies are
    appended, which is the full real solution set of the coefficient
    equations sum a_i a_{i+k} = c_k-terms.
    """
    rs = symbol_roots(L)
    sols = [_factor_from_bits(L, rs, bits) for bits in enumerate_branches(rs)]
    if include_sign_flips:
        sols += [
            FactorSolution(s.n, tuple(-v for v in s.a), s.branch, s.roots_selected, -1, tuple(-v for v in s.a_fine), s.dps)
            for s in sols
        ]
    return sols


def factor_residual(q: QPolynomial, sol: FactorSolution, num: int = 1001) -> float:
    """Max over xi in [-2pi, 2pi] of | |S_n|^2 - Q_n(cos(xi/2)) |."""
    xi = np.linspace(-2 * np.pi, 2 * np.pi, num)
    return float(np.max(np.abs(np.abs(sol.symbol(xi)) ** 2 - q(np.cos(xi / 2)))))
