import math
from decimal import Decimal, getcontext
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from hyperlat.errors import DomainError, RegimeMismatch, TooCloseToRim
from hyperlat.isoperimetry import (AlphaLinear, CutDecomposition, Inequality, alpha, alpha_identity_residual,
                                   boundary_ratio_check, bs_bound, cheeger_sequence, layer_inequalities,
                                   layer_inequality_check, min_vertex_cut, pc_hyper, pc_nonamenable, pc_quad,
                                   random_connected_set, threshold_bounds, vertex_boundary, volume_bound)
from hyperlat.tessellation import build_ball

getcontext().prec = 60


def alpha_decimal(d):
    return (Decimal(d - 6) + Decimal((d - 2) * (d - 6)).sqrt()) / 2


def test_alpha_values():
    assert alpha(7) == pytest.approx((1 + math.sqrt(5)) / 2, abs=1e-15)
    assert alpha(8) == pytest.approx(1 + math.sqrt(3), abs=1e-12)
    with pytest.raises(DomainError):
        alpha(6)


def test_identity_and_quad_identity():
    for d in range(7, 31):
        assert alpha_identity_residual(d) < 1e-10
    # the quadrangulation constant satisfies a_{d+2} = d - 4 + a_{d+2}/(1 + a_{d+2})
    for d in range(5, 20):
        a = alpha(d + 2)
        assert abs(a - (d - 4) - a / (1 + a)) < 1e-10
    # whereas the variant with a_d on the right does not hold
    assert abs(alpha(9) - 3 - alpha(7) / (1 + alpha(7))) > 0.1


def test_volume_bound():
    assert volume_bound(6) == 7
    assert volume_bound(12) == 19
    for n in range(0, 60):
        assert volume_bound(n) == math.floor(Fraction(n * n, 12) + Fraction(n, 2) + 1)


@settings(max_examples=300, deadline=None)
@given(st.integers(7, 40), st.fractions(max_denominator=50).filter(lambda x: abs(x) < 100),
       st.fractions(max_denominator=50).filter(lambda x: abs(x) < 100))
def test_alpha_linear_sign_matches_high_precision(d, a, b):
    x = AlphaLinear(a, b, d)
    exact = Decimal(a.numerator) / Decimal(a.denominator) + Decimal(b.numerator) / Decimal(b.denominator) * alpha_decimal(d)
    expected = (exact > 0) - (exact < 0)
    if abs(exact) > Decimal("1e-40"):
        assert x.sign() == expected


def test_alpha_linear_exact_zero():
    # alpha is irrational, so a + b*alpha vanishes only when a = b = 0
    assert AlphaLinear.of(0, 0, 7).sign() == 0
    assert AlphaLinear.of(-1, 1, 7).sign() == 1  # alpha - 1 > 0
    assert AlphaLinear.of(2, -1, 7).sign() == 1  # 2 - alpha > 0
    assert Inequality("t", 1, 1).holds and not Inequality("t", 1, 1, strict=True).holds


def test_threshold_examples():
    h = threshold_bounds(7, 3)
    assert h.pc_hyper == pytest.approx(0.34549, abs=1e-5)
    assert h.bs_bound == pytest.approx(0.38197, abs=1e-5)
    assert threshold_bounds(5, 4).pc_quad == pytest.approx(0.37690, abs=1e-5)
    assert threshold_bounds(6, 3).pc_deg6 == Fraction(2, 3)
    assert threshold_bounds(6, 3, beta=0).pc_nonamenable == Fraction(2, 3)
    assert pc_nonamenable(1) == Fraction(1, 2) == Fraction(bs_bound(1)).limit_denominator(10)
    with pytest.raises(DomainError):
        threshold_bounds(5, 3)
    with pytest.raises(DomainError):
        threshold_bounds(7, 3, beta=-1)


def test_pair_ratio_reproduces_threshold():
    # the threshold is r/(1+r) for the interface-to-boundary ratio r
    for d in range(7, 15):
        r = threshold_bounds(d, 3).pair_ratio
        assert r / (1 + r) == pytest.approx(pc_hyper(d), rel=1e-12)
    for d in range(5, 12):
        r = threshold_bounds(d, 4).pair_ratio
        assert r / (1 + r) == pytest.approx(pc_quad(d), rel=1e-12)


@settings(max_examples=30, deadline=None)
@given(st.integers(7, 60))
def test_hyper_bound_beats_generic(d):
    assert pc_hyper(d) < bs_bound(alpha(d))


@settings(max_examples=30, deadline=None)
@given(st.integers(5, 60))
def test_quad_bound_beats_generic(d):
    assert pc_quad(d) < bs_bound(alpha(d + 2))


def test_vertex_boundary_examples():
    b = build_ball(7, 3, 3)
    assert len(vertex_boundary(b, {0})) == 7
    B1 = set(b.ball_vertices(1).tolist())
    assert len(vertex_boundary(b, B1)) == 21
    assert boundary_ratio_check(b, B1, 7).holds
    t = build_ball(6, 3, 3)
    assert len(vertex_boundary(t, set(t.ball_vertices(1).tolist()))) == 12
    with pytest.raises(TooCloseToRim):
        vertex_boundary(b, set(b.ball_vertices(2).tolist()))


def test_cheeger_examples():
    rep = cheeger_sequence(build_ball(7, 3, 8))
    row = rep.rows[4]
    assert (row.ball, row.boundary) == (232, 385)
    assert row.ratio == pytest.approx(1.6595, abs=1e-4)
    assert rep.rows[7].ratio == pytest.approx(1.6203, abs=1e-4)
    assert abs(rep.rows[7].ratio - alpha(7)) < 0.003
    t = cheeger_sequence(build_ball(6, 3, 11))
    assert t.target == 0.0
    assert t.rows[10].ball == 331 and t.rows[10].boundary == 66
    table = rep.table()
    assert set(table[0]) == {"n", "ball", "boundary", "ratio", "target", "abs_err"}


@pytest.mark.parametrize("d,g", [(7, 3), (8, 3), (5, 4), (6, 4)])
def test_cheeger_error_decreasing(d, g):
    rows = cheeger_sequence(build_ball(d, g, 9)).rows
    target = alpha(d) if g == 3 else alpha(d + 2)
    errs = [abs(r.ratio - target) for r in rows[2:]]
    assert all(b < a for a, b in zip(errs, errs[1:]))


@pytest.mark.parametrize("d,g,size", [(7, 3, 7), (6, 3, 6), (5, 4, 5), (4, 4, 4)])
def test_min_vertex_cut_is_neighbourhood(d, g, size):
    b = build_ball(d, g, 3)
    cut = min_vertex_cut(b)
    assert len(cut.X) == size
    assert cut.Y == {0} and cut.Z == frozenset()


def test_layer_inequality_examples():
    (ineq, strict) = layer_inequalities(7, 1, 0, 7, 3)
    assert ineq.holds and ineq.slack == 0
    assert strict.holds
    b = build_ball(7, 3, 4)
    X = frozenset(b.layer_vertices(2).tolist())
    decomp = CutDecomposition(X, frozenset(b.layer_vertices(1).tolist()), frozenset({0}), frozenset({0}))
    first = layer_inequality_check(decomp, 7, 3)[0]
    assert (first.lhs, first.rhs) == (20, 21)
    # the ball form: |dB_n| = (d-5)|layer n| + (d-6)|B_{n-1}| + 6
    s = b.layer_sizes
    for n in (1, 2, 3):
        assert s[n + 1] - s[n] == 2 * (s[n] - s[n - 1]) + s[n - 1] + 6
    q = layer_inequalities(5, 1, 0, 5, 4)
    assert q[0].holds and q[0].slack == 0
    assert len(q) == 2  # the "+4" form only applies when |Y| > 1
    with pytest.raises(RegimeMismatch):
        layer_inequalities(5, 1, 0, 5, 3)


@settings(max_examples=25, deadline=None)
@given(st.sampled_from([(7, 3), (8, 3), (5, 4), (6, 4)]), st.integers(2, 40), st.integers(0, 10**6))
def test_random_sets_satisfy_isoperimetry(lat, size, seed):
    d, g = lat
    b = build_ball(d, g, 6 if g == 3 else 7)
    S = random_connected_set(b, size, seed, max_layer=3)
    d_alpha = d if g == 3 else d + 2
    assert boundary_ratio_check(b, S, d_alpha).holds
    cut = min_vertex_cut(b, source=S)
    for ineq in layer_inequality_check(cut, d, g):
        assert ineq.holds, (ineq.name, len(cut.X), len(cut.Y), len(cut.Z))
