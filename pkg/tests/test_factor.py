import warnings
from fractions import Fraction as F
from math import sqrt

import numpy as np
import pytest
import sympy as sp

from splinescaling.factor import (
    BranchInvalid,
    aberth_roots,
    backward_error,
    enumerate_solutions,
    factor_residual,
    laurent_symbol,
    resolve_branch,
    spectral_factor,
    symbol_roots,
)
from splinescaling.symbol import lorentz_q

REFERENCE_A4 = [2.6064, -2.3381, 0.8516, -0.1199]


def L(n):
    return laurent_symbol(lorentz_q(n))


def test_laurent_symbol_examples():
    assert L(3).exact == (F(19, 4), F(-9, 2), F(3, 4))
    assert L(1).exact == (F(1),)
    assert L(4).exact == (F(13), F(-131, 8), F(5), F(-5, 8))


@pytest.mark.parametrize("n", [2, 5, 9])
def test_laurent_symbol_matches_q_on_circle(n):
    sym, q = L(n), lorentz_q(n)
    xi = np.linspace(-2 * np.pi, 2 * np.pi, 301)
    # cosine sums cancel, so compare against the coefficient magnitude
    scale = float(sum(abs(c) for c in sym.exact))
    np.testing.assert_allclose(sym(xi), q(np.cos(xi / 2)), rtol=0, atol=1e-14 * scale)
    z = np.exp(-0.5j * xi)
    poly_val = np.polyval(sym.polynomial()[::-1], z) / z ** (n - 1)
    np.testing.assert_allclose(poly_val.real, q(np.cos(xi / 2)), rtol=0, atol=1e-13 * scale)
    assert np.max(np.abs(poly_val.imag)) < 1e-13 * scale


def test_aberth_against_companion_matrix():
    rng = np.random.default_rng(3)
    c = rng.standard_normal(9)
    got = aberth_roots(c)
    want = np.roots(c[::-1])
    assert len(got) == len(want) == 8
    for r in want:
        assert np.min(np.abs(got - r)) < 1e-10


def test_roots_n2_closed_form():
    rs = symbol_roots(L(2))
    assert sorted(r.real for r in rs.roots) == pytest.approx([2 - sqrt(3), 2 + sqrt(3)], rel=1e-14)
    assert rs.pairs[0][0] == pytest.approx(2 + sqrt(3))
    assert rs.pairs[0][1] == pytest.approx(2 - sqrt(3))


def test_roots_n1_empty():
    rs = symbol_roots(L(1))
    assert rs.roots == () and rs.pairs == () and rs.groups == ()


def test_roots_n3_against_numpy():
    sym = L(3)
    rs = symbol_roots(sym)
    want = np.roots(sym.polynomial()[::-1])
    assert len(rs.roots) == 4
    for r in rs.roots:
        assert np.min(np.abs(want - r)) < 1e-10
    assert np.prod(rs.roots) == pytest.approx(1.0, abs=1e-12)
    assert len(rs.pairs) == 2 and rs.groups == ((0, 1),)
    for outer, inner in rs.pairs:
        assert outer * inner == pytest.approx(1.0, abs=1e-14)


@pytest.mark.parametrize("n", range(2, 13))
def test_roots_reconstruct_symbol(n):
    sym = L(n)
    rs = symbol_roots(sym)
    assert backward_error(sym.polynomial(), np.array(rs.roots)) <= 1e-11
    allr = [r for pair in rs.pairs for r in pair]
    rebuilt = np.poly(allr)[::-1].real * sym.polynomial()[-1]
    np.testing.assert_allclose(rebuilt, sym.polynomial(), rtol=0, atol=1e-8 * np.max(np.abs(sym.polynomial())))


def test_factor_n2_default_branch():
    s = spectral_factor(L(2))
    assert s.a == pytest.approx([(1 + sqrt(3)) / 2, (1 - sqrt(3)) / 2], abs=1e-12)


def test_factor_n3_closed_form():
    r10, inner = sqrt(10), sqrt(5 + 2 * sqrt(10))
    want = [(1 + r10 - inner) / 4, (1 - r10) / 2, (1 + r10 + inner) / 4]
    s = spectral_factor(L(3))
    assert s.a == pytest.approx(want, abs=1e-12)
    assert s.a == pytest.approx([0.1993, -1.0811, 1.8819], abs=1e-4)
    # the n=3 system
    a1, a2, a3 = s.a
    assert a1 * a1 + a2 * a2 + a3 * a3 == pytest.approx(19 / 4, abs=1e-12)
    assert a1 * a2 + a2 * a3 == pytest.approx(-9 / 4, abs=1e-12)
    assert a1 * a3 == pytest.approx(3 / 8, abs=1e-12)


def test_factor_n4_default_branch():
    s = spectral_factor(L(4))
    assert np.round(s.a, 4).tolist() == REFERENCE_A4


def test_branch_names():
    sym = L(3)
    rs = symbol_roots(sym)
    outer = spectral_factor(sym, "outer")
    inner = spectral_factor(sym, "inner")
    assert outer.a == pytest.approx(inner.a[::-1], abs=1e-12)
    assert resolve_branch(3, rs, "paper") == inner.branch
    assert resolve_branch(2, symbol_roots(L(2)), "paper") == (0,)
    assert spectral_factor(sym, "index:1").a == inner.a


def test_branch_invalid():
    sym = L(3)
    with pytest.raises(BranchInvalid):
        spectral_factor(sym, (0, 1))  # splits a conjugate pair
    with pytest.raises(BranchInvalid):
        spectral_factor(sym, "index:7")
    with pytest.raises(BranchInvalid):
        spectral_factor(sym, "sideways")


def test_enumerate_examples():
    sols = enumerate_solutions(L(2))
    assert len(sols) == 2
    assert sols[0].a == pytest.approx(sols[1].a[::-1], abs=1e-14)
    for s in sols:
        a1, a2 = s.a
        assert a1 * a1 + a2 * a2 == pytest.approx(2.0, abs=1e-13)
        assert a1 * a2 == pytest.approx(-0.5, abs=1e-13)
    one = enumerate_solutions(L(1))
    assert len(one) == 1 and one[0].a == (1.0,)


def _groebner_real_solutions_n4():
    # independent oracle: exact lex Groebner basis of the n = 4 coefficient system
    a1, a2, a3, a4 = sp.symbols("a1:5")
    R = sp.Rational
    eqs = [
        a1**2 + a2**2 + a3**2 + a4**2 - 13,
        a1 * a2 + a2 * a3 + a3 * a4 + R(131, 16),
        a1 * a3 + a2 * a4 - R(5, 2),
        a1 * a4 + R(5, 16),
    ]
    G = sp.groebner(eqs, a4, a3, a2, a1, order="lex").exprs
    uni = sp.Poly(G[-1], a1)
    out = []
    for root in sp.real_roots(uni):
        v1 = sp.N(root, 40)
        vals = {a1: v1}
        for g, var in ((G[2], a2), (G[1], a3), (G[0], a4)):
            # shape form: each element is linear in its leading variable
            vals[var] = sp.solve(g.subs(vals), var)[0]
        out.append([float(vals[v]) for v in (a1, a2, a3, a4)])
    return out


def test_n4_has_eight_real_solutions():
    oracle = _groebner_real_solutions_n4()
    assert len(oracle) == 8
    ours = enumerate_solutions(L(4), include_sign_flips=True)
    assert len(ours) == 8
    assert len(enumerate_solutions(L(4))) == 4
    for s in ours:
        assert min(np.max(np.abs(np.array(s.a) - o)) for o in oracle) < 1e-12
    assert any(np.round(s.a, 4).tolist() == REFERENCE_A4 for s in ours)


@pytest.mark.parametrize("n", range(2, 13))
def test_enumerated_solutions_reproduce_q(n):
    q, sym = lorentz_q(n), L(n)
    sols = enumerate_solutions(sym)
    rs = symbol_roots(sym)
    assert len(sols) == 2 ** len(rs.groups)
    qm1 = q(-1.0)
    for s in sols:
        assert factor_residual(q, s) <= 1e-8 * qm1
        assert s.sum_a == pytest.approx(1.0, abs=1e-10)
        assert abs(s.sum_a_sq - sym.coeffs[0]) <= 1e-9 * sym.coeffs[0]
        assert n * s.sum_a_sq < 2 ** (2 * n - 1)
        assert np.all(np.isreal(s.a))


def test_sum_of_squares_is_mean_of_q():
    # sum a_i^2 equals the average of Q_n(cos(xi/2)) over a period, by quadrature
    for n in (3, 4, 7):
        q = lorentz_q(n)
        xi = np.linspace(0, 4 * np.pi, 4001)[:-1]  # period of cos(xi/2) is 4 pi
        mean = np.mean(q(np.cos(xi / 2)))
        s = spectral_factor(L(n))
        assert s.sum_a_sq == pytest.approx(mean, rel=1e-12)


def test_large_order_warns():
    with pytest.warns(RuntimeWarning):
        spectral_factor(L(17))
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        spectral_factor(L(16))
