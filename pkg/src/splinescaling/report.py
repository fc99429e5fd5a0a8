"""One-stop construction and verification of an order-n spline-type scaling function."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .factor import BranchSpec, FactorSolution, LaurentSymbol, factor_residual, laurent_symbol, spectral_factor
from .filterbank import NotOrthonormal, make_filter_pair
from .scaling import (
    RefinementMask,
    even_shift_correlations,
    mask_symbol_eval,
    min_abs_symbol,
    qmf_residual,
    refinement_mask,
)
from .symbol import QPolynomial, bezout_residual, lorentz_q

TOLERANCES = {
    "bezout_residual": 1e-10,
    "qmf_residual": 1e-10,
    "sum_a": 1e-10,
    "sum_a_sq": 1e-9,  # relative to c_0
    "factor_residual": 1e-8,  # relative to Q_n(-1)
    "mask_at_one": 1e-12,
    "min_abs_P_on_pipi": 1e-9,  # slack below cos(pi/4)^n
    "q_lower_bound": 1e-12,  # slack below 1
    "orthonormality_max_offdiag": 1e-9,
    "orthonormality_diag": 1e-9,
}


@dataclass(frozen=True)
class Construction:
    n: int
    q: QPolynomial
    symbol: LaurentSymbol
    factor: FactorSolution
    mask: RefinementMask


def construct(n: int, branch: BranchSpec = "paper") -> Construction:
    q = lorentz_q(n)
    L = laurent_symbol(q)
    s = spectral_factor(L, branch)
    return Construction(n, q, L, s, refinement_mask(n, s))


@dataclass
class VerificationReport:
    n: int
    branch: str
    bits: tuple[int, ...]
    a: tuple[float, ...]
    p: tuple[float, ...]
    checks: dict[str, float] = field(default_factory=dict)
    tolerances: dict[str, float] = field(default_factory=dict)
    passes: dict[str, bool] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.passes.values())

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "branch": self.branch,
            "branch_bits": list(self.bits),
            "a": list(self.a),
            "p": list(self.p),
            "checks": self.checks,
            "tolerances": self.tolerances,
            "passes": self.passes,
            "pass": self.ok,
        }


def verify(con: Construction, branch_name: str = "paper", mask: RefinementMask | None = None) -> VerificationReport:
    """
    Check every identity the construction should satisfy.

    ``mask`` overrides the mask derived from the factor, which lets a
    tampered mask be fed through the same gate.
    """
    n = con.n
    mask = con.mask if mask is None else mask
    a = np.asarray(con.factor.a)
    c0 = con.symbol.coeffs[0]
    x = np.linspace(-1.0, 1.0, 1001)
    corr = even_shift_correlations(mask)

    checks = {
        "bezout_residual": bezout_residual(con.q, 1001),
        "qmf_residual": qmf_residual(mask, 2001),
        "sum_a": float(np.sum(a)),
        "sum_a_sq": float(np.dot(a, a)),
        "c0": c0,
        "factor_residual": factor_residual(con.q, con.factor) / con.q(-1.0),
        "mask_at_one": abs(mask_symbol_eval(mask, 0.0) - 1.0),
        "l2_bound_lhs": n * float(np.dot(a, a)),
        "l2_bound_rhs": float(2 ** (2 * n - 1)),
        "min_abs_P_on_pipi": min_abs_symbol(mask),
        "min_abs_P_bound": float(np.cos(np.pi / 4) ** n),
        "q_min_on_grid": float(np.min(con.q(x))),
        "orthonormality_max_offdiag": float(np.max(np.abs(corr[1:]))) if len(corr) > 1 else 0.0,
        "orthonormality_diag": abs(float(corr[0]) - 2.0),
    }
    tol = dict(TOLERANCES)
    passes = {
        "bezout_residual": checks["bezout_residual"] <= tol["bezout_residual"],
        "qmf_residual": checks["qmf_residual"] <= tol["qmf_residual"],
        "sum_a": abs(checks["sum_a"] - 1.0) <= tol["sum_a"],
        "sum_a_sq": abs(checks["sum_a_sq"] - c0) <= tol["sum_a_sq"] * c0,
        "factor_residual": checks["factor_residual"] <= tol["factor_residual"],
        "mask_at_one": checks["mask_at_one"] <= tol["mask_at_one"],
        "l2_bound": checks["l2_bound_lhs"] < checks["l2_bound_rhs"],
        "min_abs_P_on_pipi": checks["min_abs_P_on_pipi"] >= checks["min_abs_P_bound"] - tol["min_abs_P_on_pipi"],
        "q_at_zero": con.q(0) == 2 ** (n - 1),
        "q_at_one": con.q(1) == 1,
        "q_lower_bound": checks["q_min_on_grid"] >= 1.0 - tol["q_lower_bound"],
        "orthonormality_max_offdiag": checks["orthonormality_max_offdiag"] <= tol["orthonormality_max_offdiag"],
        "orthonormality_diag": checks["orthonormality_diag"] <= tol["orthonormality_diag"],
    }
    try:
        make_filter_pair(mask)
        passes["filter_pair"] = True
    except NotOrthonormal:
        passes["filter_pair"] = False
    return VerificationReport(
        n, branch_name, con.factor.branch, con.factor.a, tuple(float(v) for v in mask.p), checks, tol, passes
    )


def fraction_str(c: Fraction) -> str:
    return f"{c.numerator}/{c.denominator}" if c.denominator != 1 else str(c.numerator)
