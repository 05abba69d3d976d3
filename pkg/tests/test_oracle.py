from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from hyperlat.errors import BudgetExceeded
from hyperlat.oracle import (connecting_counts, count_connected_subgraphs, enumerate_connected_subgraphs,
                             enumerate_disc_triangulations, exhaustive_percolation)
from hyperlat.oracle.disc import _code_from, _Search, _rotation, canonical_code
from hyperlat.planar_map import build_from_rotation
from hyperlat.tessellation import build_ball


def path(k):
    rot = {i: [j for j in (i - 1, i + 1) if 0 <= j < k] for i in range(k)}
    return build_from_rotation(rot, 0)


def test_exhaustive_trivial_values():
    b = build_ball(6, 3, 1)
    assert exhaustive_percolation(b, 1) == 1
    assert exhaustive_percolation(b, 0) == 0
    # a path of three vertices: all three must be open
    assert exhaustive_percolation(path(3), Fraction(1, 3)) == Fraction(1, 27)
    with pytest.raises(ValueError):
        exhaustive_percolation(b, 1.5)


def test_exhaustive_half_is_a_count():
    b = build_ball(7, 3, 1)
    counts = connecting_counts(b)
    assert exhaustive_percolation(b, 0.5) == Fraction(sum(counts), 2 ** b.n_vertices)
    # the root plus at least one of its 7 neighbours
    assert sum(counts) == 2 ** 7 - 1


def test_exhaustive_budget():
    with pytest.raises(BudgetExceeded):
        exhaustive_percolation(build_ball(6, 3, 3), 0.5)


@settings(max_examples=20, deadline=None)
@given(st.fractions(min_value=0, max_value=1, max_denominator=20))
def test_exhaustive_single_edge_ball(p):
    # one centre and a ring of d: P = p * (1 - (1-p)^d)
    b = build_ball(8, 3, 1)
    assert exhaustive_percolation(b, p) == p * (1 - (1 - p) ** 8)


def test_subgraph_counts():
    t = build_ball(6, 3, 4)
    assert count_connected_subgraphs(t, 0, 1) == {1: 1}
    assert count_connected_subgraphs(t, 0, 2) == {1: 1, 2: 6}
    assert count_connected_subgraphs(t, 0, 5) == {1: 1, 2: 6, 3: 33, 4: 176, 5: 930}
    h = build_ball(7, 3, 5)
    assert count_connected_subgraphs(h, 0, 5) == {1: 1, 2: 7, 3: 49, 4: 350, 5: 2555}
    q = build_ball(5, 4, 5)
    assert count_connected_subgraphs(q, 0, 5) == {1: 1, 2: 5, 3: 30, 4: 185, 5: 1175}


@pytest.mark.parametrize("d,g", [(6, 3), (7, 3), (4, 4), (5, 4)])
def test_two_subgraph_enumerators_agree(d, g):
    b = build_ball(d, g, 5)
    sets = list(enumerate_connected_subgraphs(b, 0, 5))
    assert len(sets) == len(set(sets))
    by_size = {}
    for S in sets:
        by_size[len(S)] = by_size.get(len(S), 0) + 1
    assert by_size == count_connected_subgraphs(b, 0, 5)


def test_subgraph_budget():
    with pytest.raises(BudgetExceeded):
        list(enumerate_connected_subgraphs(build_ball(6, 3, 5), 0, 6, max_sets=100))


def test_disc_smallest_cases():
    (tri,) = [t for t in enumerate_disc_triangulations(3, 6, 6)]
    assert (tri.n, tri.k) == (3, 3)
    hexes = [t for t in enumerate_disc_triangulations(6, 7, 6, n_boundary_min=6)]
    wheel = [t for t in hexes if t.k == 7]
    assert len(wheel) == 1
    w = wheel[0]
    assert w.degree(6) == 6 and w.hull_boundary == [6] and w.cut_sizes() == (6, 1, 0)
    with pytest.raises(BudgetExceeded):
        list(enumerate_disc_triangulations(11, 12))


def test_polygon_classes_up_to_symmetry():
    # triangulations of an n-gon up to rotation and reflection
    counts = {}
    for t in enumerate_disc_triangulations(9, 9, 6):
        if t.k == t.n:
            counts[t.n] = counts.get(t.n, 0) + 1
    assert [counts[n] for n in range(3, 10)] == [1, 1, 1, 3, 4, 12, 27]


def catalan(m):
    return comb(2 * m, m) // (m + 1)


def automorphisms(t):
    codes = []
    for i in range(t.n):
        j = (i + 1) % t.n
        codes.append(_code_from(t.rotation, i, j, False))
        codes.append(_code_from(t.rotation, j, i, True))
    return codes.count(min(codes))


@pytest.mark.parametrize("n,k,delta", [(6, 6, 6), (7, 7, 6), (8, 8, 6), (6, 9, 6), (7, 10, 5), (8, 11, 6)])
def test_orbit_sizes_recover_labelled_count(n, k, delta):
    labelled = list(_Search(n, k, delta).run())
    classes = [t for t in enumerate_disc_triangulations(n, k, delta, n_boundary_min=n)]
    assert sum(2 * n // automorphisms(t) for t in classes) == len(labelled)
    if k == n:
        assert len(labelled) == catalan(n - 2)


def test_canonical_code_is_invariant():
    for t in enumerate_disc_triangulations(7, 10, 6):
        # relabel the boundary by a rotation and recompute
        n, s = t.n, 2
        perm = {v: ((v + s) % n if v < n else v) for v in range(t.k)}
        rot = {perm[v]: [perm[u] for u in r] for v, r in t.rotation.items()}
        assert canonical_code(rot, n) == t.code
        tris = [tuple(perm[v] for v in tri) for tri in t.triangles]
        assert canonical_code(_rotation(n, t.k, tris), n) == t.code


def test_disc_outputs_are_valid():
    for t in enumerate_disc_triangulations(8, 12, 6):
        m = t.map
        m.check_invariants()
        assert m.n_vertices == t.k
        assert sorted(int(x) for x in m.face_degrees()) == [3] * (len(t.triangles)) + [t.n]
        assert all(t.degree(v) >= 6 for v in t.internal)
        assert 2 * t.k - t.n - 2 == len(t.triangles)
