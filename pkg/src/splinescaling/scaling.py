"""Refinement coefficients of P_n(z) S_n(z) and cascade sampling of the scaling function."""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import mpmath
import numpy as np

from .factor import FactorSolution
from .symbol import bspline_mask

ORTHONORMALITY_TOL = 1e-9
DEFAULT_LEVEL = 10
DEFAULT_ITERS = 25


class NonConvergence(RuntimeWarning):
    """Successive cascade iterates drifted apart over the last iterations."""


@dataclass(frozen=True)
class RefinementMask:
    """p_k for k = k_min..k_max in phi(x) = sum_k p_k phi(2x - k); sum p_k = 2."""

    n: int
    k_min: int
    k_max: int
    p: np.ndarray

    @property
    def indices(self) -> np.ndarray:
        return np.arange(self.k_min, self.k_max + 1)

    def perturbed(self, index: int, delta: float) -> "RefinementMask":
        """Copy with p_index shifted by ``delta``; used as a negative control."""
        if not self.k_min <= index <= self.k_max:
            raise IndexError(f"mask index {index} outside [{self.k_min}, {self.k_max}]")
        p = self.p.copy()
        p[index - self.k_min] += delta
        return RefinementMask(self.n, self.k_min, self.k_max, p)


@dataclass(frozen=True)
class ScalingTable:
    """
    Samples phi(k_min + j 2^-J), j = 0..(k_max - k_min) 2^J.

    ``diffs[m]`` is the sup-norm change made by cascade step m + 1.
    """

    n: int
    level: int
    k_min: int
    k_max: int
    samples: np.ndarray
    diffs: tuple[float, ...] = ()

    @property
    def step(self) -> float:
        return 2.0**-self.level

    @property
    def x(self) -> np.ndarray:
        return self.k_min + np.arange(len(self.samples)) * self.step

    @property
    def last_diff(self) -> float:
        return self.diffs[-1] if self.diffs else float("nan")


def refinement_mask(n: int, s: FactorSolution) -> RefinementMask:
    if s.n != n:
        raise ValueError(f"factor is of order {s.n}, expected {n}")
    bcoeffs = bspline_mask(n).coeffs
    # S_n(z) = z (a_1 + a_2 z + ...), so the product starts at z^1
    if s.a_fine:
        # the a_i grow like sqrt(C(2n-1, n-1)) while p_k stay O(1): convolve before rounding
        with mpmath.workdps(s.dps):
            b = [mpmath.mpf(c.numerator) / c.denominator for c in bcoeffs]
            p = np.array([
                float(2 * mpmath.fsum(b[i] * s.a_fine[k - i] for i in range(max(0, k - n + 1), min(k, n) + 1)))
                for k in range(2 * n)
            ])
    else:
        p = 2.0 * np.convolve([float(c) for c in bcoeffs], np.asarray(s.a, dtype=float))
    return RefinementMask(n, 1, 2 * n, p)


def even_shift_correlations(mask: RefinementMask) -> np.ndarray:
    """sum_k p_k p_{k+2m} for m = 0, 1, ..."""
    p = mask.p
    return np.array([np.dot(p[: len(p) - 2 * m], p[2 * m:]) for m in range((len(p) + 1) // 2)])


def orthonormality_defect(mask: RefinementMask) -> float:
    """max_m |sum_k p_k p_{k+2m} - 2 delta_m0|."""
    corr = even_shift_correlations(mask)
    corr[0] -= 2.0
    return float(np.max(np.abs(corr)))


def mask_symbol_eval(mask: RefinementMask, xi):
    """P(exp(-i xi/2)) = 1/2 sum_k p_k exp(-i k xi/2); scalar or array ``xi``."""
    xi = np.asarray(xi, dtype=float)
    z = np.exp(-0.5j * xi)
    val = 0.5 * z**mask.k_min * np.polyval(mask.p[::-1], z)
    return complex(val) if np.ndim(val) == 0 else val


def qmf_residual(mask: RefinementMask, num: int = 2001) -> float:
    """max over xi in [-2pi, 2pi] of | |P(z)|^2 + |P(-z)|^2 - 1 |."""
    xi = np.linspace(-2 * np.pi, 2 * np.pi, num)
    # -z = exp(-i (xi + 2pi)/2)
    total = np.abs(mask_symbol_eval(mask, xi)) ** 2 + np.abs(mask_symbol_eval(mask, xi + 2 * np.pi)) ** 2
    return float(np.max(np.abs(total - 1.0)))


def min_abs_symbol(mask: RefinementMask, num: int = 2001) -> float:
    """min over xi in [-pi, pi] of |P(exp(-i xi/2))|."""
    xi = np.linspace(-np.pi, np.pi, num)
    return float(np.min(np.abs(mask_symbol_eval(mask, xi))))


def cascade(mask: RefinementMask, level: int = DEFAULT_LEVEL, iters: int = DEFAULT_ITERS) -> ScalingTable:
    """
    Iterate phi <- sum_k p_k phi(2x - k) on the 2^-level grid over [k_min, k_max].

    The first iterate is the indicator of [k_min, k_min + 1).  Because the grid
    is dyadic, 2x - k of a grid point is again a grid point, so every iterate
    is sampled exactly without interpolation.
    """
    if level < 1:
        raise ValueError("level must be >= 1")
    if iters < 1:
        raise ValueError("iters must be >= 1")
    defect = orthonormality_defect(mask)
    if defect > ORTHONORMALITY_TOL:
        raise ValueError(f"mask is not orthonormal (defect {defect:.3g}); cascade needs a valid mask")

    scale = 2**level
    size = (mask.k_max - mask.k_min) * scale + 1
    phi = np.zeros(size)
    phi[:scale] = 1.0
    j2 = 2 * np.arange(size)
    gathers = []
    for k, pk in zip(mask.indices, mask.p):
        src = j2 + (mask.k_min - k) * scale
        ok = (src >= 0) & (src < size)
        gathers.append((pk, np.flatnonzero(ok), src[ok]))

    diffs = []
    for _ in range(iters):
        new = np.zeros(size)
        for pk, dst, src in gathers:
            new[dst] += pk * phi[src]
        diffs.append(float(np.max(np.abs(new - phi))))
        phi = new

    if len(diffs) >= 3 and diffs[-1] > diffs[-2] > diffs[-3]:
        warnings.warn(
            f"cascade iterates diverging: last changes {diffs[-3]:.3g}, {diffs[-2]:.3g}, {diffs[-1]:.3g}",
            NonConvergence,
            stacklevel=2,
        )
    return ScalingTable(mask.n, level, mask.k_min, mask.k_max, phi, tuple(diffs))


def _trapezoid(values: np.ndarray, h: float) -> float:
    # samples are zero-extended past both ends of the support, so the
    # trapezoid rule over any enclosing interval weights every sample by h
    return float(np.sum(values) * h)


def riemann_integral(table: ScalingTable) -> float:
    return _trapezoid(table.samples, table.step)


def partition_of_unity_error(table: ScalingTable) -> float:
    """max over x in one unit cell of |sum_k phi(x + k) - 1|."""
    scale = 2**table.level
    s = table.samples
    cells = -(-len(s) // scale)
    padded = np.zeros(cells * scale)
    padded[: len(s)] = s
    return float(np.max(np.abs(padded.reshape(cells, scale).sum(axis=0) - 1.0)))


def shifted_inner_products(table: ScalingTable, max_shift: int) -> np.ndarray:
    """Trapezoid estimates of the integral of phi(x) phi(x - k), k = 0..max_shift."""
    scale = 2**table.level
    s = table.samples
    out = np.zeros(max_shift + 1)
    for k in range(max_shift + 1):
        off = k * scale
        if off < len(s):
            out[k] = _trapezoid(s[off:] * s[: len(s) - off], table.step)
    return out
