"""
Orthonormal two-channel filter bank built from a refinement mask.

Periodic boundaries keep the transform exactly orthogonal on finite signals,
so perfect reconstruction and energy preservation certify the mask.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .scaling import ORTHONORMALITY_TOL, RefinementMask, orthonormality_defect


class NotOrthonormal(ValueError):
    pass


class LengthError(ValueError):
    pass


class ShapeError(ValueError):
    pass


@dataclass(frozen=True)
class OrthFilterPair:
    """Lowpass h_k = p_k / sqrt 2 and highpass g_k = (-1)^k h_{K-k}, both indexed from ``offset``."""

    h: np.ndarray
    g: np.ndarray
    offset: int

    def __len__(self) -> int:
        return len(self.h)


def make_filter_pair(mask: RefinementMask) -> OrthFilterPair:
    defect = orthonormality_defect(mask)
    if defect > ORTHONORMALITY_TOL:
        raise NotOrthonormal(f"mask fails discrete orthonormality: defect {defect:.3g} > {ORTHONORMALITY_TOL:g}")
    h = np.asarray(mask.p, dtype=float) / np.sqrt(2.0)
    k = mask.indices
    # g_k = (-1)^k h_{K-k} with K = k_min + k_max; on the shared index range that is a reversal
    g = (-1.0) ** k * h[::-1]
    return OrthFilterPair(h, g, mask.k_min)


def _analysis(x: np.ndarray, pair: OrthFilterPair) -> tuple[np.ndarray, np.ndarray]:
    n = x.shape[-1]
    idx = (2 * np.arange(n // 2)[:, None] + np.arange(len(pair))[None, :]) % n
    blocks = x[..., idx]
    return blocks @ pair.h, blocks @ pair.g


def _synthesis(a: np.ndarray, d: np.ndarray, pair: OrthFilterPair) -> np.ndarray:
    half = a.shape[-1]
    n = 2 * half
    idx = (2 * np.arange(half)[:, None] + np.arange(len(pair))[None, :]) % n
    contrib = a[..., :, None] * pair.h + d[..., :, None] * pair.g
    out = np.zeros(a.shape[:-1] + (n,))
    flat_out = out.reshape(-1, n)
    flat_contrib = contrib.reshape(-1, half * len(pair))
    for row_out, row_c in zip(flat_out, flat_contrib):
        np.add.at(row_out, idx.ravel(), row_c)
    return out


def dwt_periodic(signal, pair: OrthFilterPair, levels: int) -> list[np.ndarray]:
    """
    Multilevel periodic analysis.

    Returns ``[a_L, d_L, d_{L-1}, ..., d_1]`` (coarsest first).  Leading axes
    of ``signal`` are treated as a batch.
    """
    x = np.asarray(signal, dtype=float)
    if levels < 1:
        raise LengthError("levels must be >= 1")
    n = x.shape[-1]
    if n % (2**levels):
        raise LengthError(f"signal length {n} is not divisible by 2^{levels}")
    if n // 2 ** (levels - 1) < len(pair):
        raise LengthError(f"signal length {n} too short for {levels} levels with a {len(pair)}-tap filter")
    details = []
    for _ in range(levels):
        x, d = _analysis(x, pair)
        details.append(d)
    return [x] + details[::-1]


def idwt_periodic(pyramid, pair: OrthFilterPair) -> np.ndarray:
    if len(pyramid) < 2:
        raise ShapeError("pyramid needs an approximation and at least one detail band")
    a = np.asarray(pyramid[0], dtype=float)
    for d in pyramid[1:]:
        d = np.asarray(d, dtype=float)
        if d.shape != a.shape:
            raise ShapeError(f"detail band shape {d.shape} does not match approximation {a.shape}")
        a = _synthesis(a, d, pair)
    return a


def pyramid_norm(pyramid) -> np.ndarray:
    """Euclidean norm of all coefficients (per batch row)."""
    return np.sqrt(sum(np.sum(np.asarray(c) ** 2, axis=-1) for c in pyramid))
