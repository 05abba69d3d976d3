from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hyperlat.errors import NotAnInterface, RegimeMismatch, TooCloseToRim
from hyperlat.interfaces import (INFINITE, boundary_walk_check, census_violations, enumerate_pairs, interface_of,
                                 is_disc_triangulation, occupied_cluster, peierls_sums, ratio_check, reconstruct,
                                 regime_inequalities, sharper_volume_bound, triangulate_TMB, unzip, unzip_length,
                                 validate_unzip, volume_check)
from hyperlat.isoperimetry import random_connected_set, volume_bound
from hyperlat.oracle import enumerate_connected_subgraphs
from hyperlat.percolation import PercolationInstance
from hyperlat.tessellation import build_ball

T6 = build_ball(6, 3, 6)
H73 = build_ball(7, 3, 5)
H54 = build_ball(5, 4, 5)


def instance(ball, occupied):
    occ = np.zeros(ball.n_vertices, dtype=bool)
    occ[list(occupied)] = True
    return PercolationInstance(ball, 0.5, 0, 0, occ)


def test_occupied_cluster_examples():
    o = T6.map.root
    nb = T6.map.adjacency[o][0]
    assert occupied_cluster(instance(T6, range(T6.n_vertices))) is INFINITE
    assert occupied_cluster(instance(T6, [o])) == {o}
    assert occupied_cluster(instance(T6, [o, nb])) == {o, nb}
    assert occupied_cluster(instance(T6, [nb])) == frozenset()


def test_single_vertex_in_t6():
    p = interface_of({0}, T6)
    assert p.M == {0}
    assert p.B == frozenset(T6.map.adjacency[0])
    assert p.B_o == p.B
    assert p.counts() == (1, 6, 6, 1)


def test_ball_of_radius_one_in_h73():
    B1 = H73.ball_vertices(1).tolist()
    p = interface_of(B1, H73)
    assert p.M == frozenset(H73.layer_vertices(1).tolist())
    assert p.B == frozenset(H73.layer_vertices(2).tolist())
    assert (p.m, p.n) == (7, 21)


def test_annulus_excludes_enclosed_vertex():
    h = T6.map
    c = h.adjacency[0][0]
    ring = set(h.adjacency[c])
    p = interface_of(ring, T6)
    assert c in p.holes and c not in p.B
    assert c not in p.C_inf()
    assert p.n == 12 and p.k == 7
    # the pair coincides with that of the filled-in hexagon
    assert p.same_pair(interface_of(ring | {c}, T6))


def test_interface_errors():
    with pytest.raises(NotAnInterface):
        interface_of({1}, T6)
    with pytest.raises(NotAnInterface):
        interface_of({0, T6.layer_vertices(2)[0]}, T6)
    small = build_ball(7, 3, 2)
    with pytest.raises(TooCloseToRim):
        interface_of(small.ball_vertices(1).tolist(), small)


def test_reconstruct_examples():
    p = reconstruct(T6, B=T6.map.adjacency[0])
    assert p.M == {0}
    L1 = H73.layer_vertices(1).tolist()
    q = reconstruct(H73, M=L1)
    assert q.B == frozenset(H73.layer_vertices(2).tolist())
    with pytest.raises(ValueError):
        reconstruct(T6)
    with pytest.raises(NotAnInterface):
        reconstruct(T6, B=T6.map.adjacency[0][:3])
    with pytest.raises(NotAnInterface):
        reconstruct(T6, M={0, T6.layer_vertices(2)[0]})


def test_enumerate_pairs_small_caps():
    c1 = enumerate_pairs(T6, 1)
    assert c1.n_pairs == 1 and c1.b_counts() == {(6, 1): 1}
    c2 = enumerate_pairs(T6, 2)
    assert c2.b_counts() == {(6, 1): 1, (8, 2): 6}
    h1 = enumerate_pairs(H73, 1)
    assert h1.b_counts() == {(7, 1): 1}
    with pytest.raises(TooCloseToRim):
        enumerate_pairs(build_ball(6, 3, 3), 4)


def test_ratio_check_examples():
    rep = ratio_check(interface_of({0}, T6), "deg6")
    assert rep.holds and rep.slack == {"M <= 2B - Bo": 5.0}
    p = interface_of(H73.ball_vertices(1).tolist(), H73)
    first = ratio_check(p, "hyper").inequalities[0]
    assert (first.lhs, first.rhs) == (14, 21)
    # B_1 induces a star here (no triangles), so the root also meets the unbounded face
    q = interface_of(H54.ball_vertices(1).tolist(), H54)
    assert (q.m, q.n, len(q.B_o)) == (6, 15, 15)
    first = ratio_check(q, "quad").inequalities[0]
    assert first.lhs == Fraction(5, 3) * 6 and first.rhs == 15 and first.holds
    with pytest.raises(RegimeMismatch):
        ratio_check(interface_of({0}, T6), "hyper")
    with pytest.raises(RegimeMismatch):
        ratio_check(interface_of({0}, H73), "quad")
    with pytest.raises(RegimeMismatch):
        regime_inequalities(1, 6, 6, "nope", 6)


def test_volume_check_examples():
    p = interface_of({0}, T6)
    assert volume_bound(6) == 7 and volume_check(p)
    hexagon = interface_of(T6.ball_vertices(1).tolist(), T6)
    assert hexagon.n == 12 and hexagon.k == 7 <= volume_bound(12) == 19
    assert sharper_volume_bound(6, 6) == 1


def test_triangulation_examples():
    T = triangulate_TMB(interface_of({0}, T6))
    assert (T.n_vertices, T.n_edges) == (7, 12) and is_disc_triangulation(T)
    p = interface_of(H73.ball_vertices(1).tolist(), H73)
    T = triangulate_TMB(p)
    assert is_disc_triangulation(T)
    assert T.n_vertices == 29
    assert T.face_degrees()[T.outer_face] == 21
    with pytest.raises(RegimeMismatch):
        triangulate_TMB(interface_of({0}, H54))


def test_unzip_identity_on_simple_cycle():
    p = interface_of({0}, T6)
    T = triangulate_TMB(p)
    res = unzip(T, p.B, p.cluster)
    assert res.boundary_length == p.n == 6
    assert validate_unzip(res, T, p) == []


def test_unzip_splits_dumbbell():
    # a cluster bending around a boundary vertex touches it from two sides
    h = T6.map
    dumbbell = None
    for C in enumerate_connected_subgraphs(h, 0, 5):
        p = interface_of(C, T6)
        if not p.holes and unzip_length(h, p) > p.n:
            dumbbell = p
            break
    assert dumbbell is not None
    T = triangulate_TMB(dumbbell)
    res = unzip(T, dumbbell.B, dumbbell.cluster)
    visits = [b for b, _ in res.entries]
    assert len(visits) > len(set(visits))
    assert validate_unzip(res, T, dumbbell) == []
    assert res.boundary_length <= 2 * dumbbell.n - len(dumbbell.B_o)
    walk = boundary_walk_check(T, dumbbell)
    assert walk["holds"]


def test_census_violation_reporting():
    c = enumerate_pairs(T6, 3)
    assert census_violations(c, "deg6", 6) == []
    # an infeasible count (|M| = 7 > 2*6 - 6) is reported
    c.pairs[(7, 6, 6, 1)] = 1
    (bad,) = census_violations(c, "deg6", 6)
    assert (bad["check"], bad["m"], bad["n"]) == ("M <= 2B - Bo", 7, 6)
    del c.pairs[(7, 6, 6, 1)]
    sums = peierls_sums(c, Fraction(2, 3))
    assert all(s <= volume_bound(n) for n, s in sums.items())


LATTICES = [(T6, "deg6", 6), (H73, "hyper", 7), (H54, "quad", 5)]


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(range(3)), st.integers(1, 25), st.integers(0, 10**6))
def test_random_clusters_give_valid_pairs(idx, size, seed):
    ball, regime, d = LATTICES[idx]
    C = random_connected_set(ball, size, seed, max_layer=ball.r - 3)
    p = interface_of(C, ball)
    assert p.M <= p.cluster and p.B_o <= p.B
    assert reconstruct(ball, B=p.B).same_pair(p)
    assert reconstruct(ball, M=p.M).same_pair(p)
    assert ratio_check(p, regime, d).holds
    h = ball.map
    # B separates the root from the rim
    assert all(h.layers[v] < h.rim_layer for v in p.K)
    if regime != "quad":
        assert volume_check(p)
        T = triangulate_TMB(p)
        assert is_disc_triangulation(T)
        res = unzip(T, p.B, p.cluster)
        assert validate_unzip(res, T, p) == []
