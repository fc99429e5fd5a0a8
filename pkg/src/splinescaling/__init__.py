"""Spline-type (Daubechies) orthogonal scaling functions built from Lorentz polynomials."""
from .factor import (
    BranchInvalid,
    ConvergenceFailure,
    FactorSolution,
    LaurentSymbol,
    PairingFailure,
    RootSet,
    enumerate_solutions,
    laurent_symbol,
    spectral_factor,
    symbol_roots,
)
from .filterbank import OrthFilterPair, dwt_periodic, idwt_periodic, make_filter_pair
from .poly import CosineSeries, RationalPoly, cosine_to_poly, poly_to_cosine
from .report import construct, verify
from .scaling import RefinementMask, ScalingTable, cascade, refinement_mask, shifted_inner_products
from .symbol import QPolynomial, bezout_residual, bspline_mask, eea_q, lorentz_q

__all__ = [
    "BranchInvalid",
    "ConvergenceFailure",
    "CosineSeries",
    "FactorSolution",
    "LaurentSymbol",
    "OrthFilterPair",
    "PairingFailure",
    "QPolynomial",
    "RationalPoly",
    "RefinementMask",
    "RootSet",
    "ScalingTable",
    "bezout_residual",
    "bspline_mask",
    "cascade",
    "construct",
    "cosine_to_poly",
    "dwt_periodic",
    "eea_q",
    "enumerate_solutions",
    "idwt_periodic",
    "laurent_symbol",
    "lorentz_q",
    "make_filter_pair",
    "poly_to_cosine",
    "refinement_mask",
    "shifted_inner_products",
    "spectral_factor",
    "symbol_roots",
    "verify",
]
