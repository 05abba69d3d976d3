import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hyperlat.errors import Disconnected, EmptySelection, MapError, NonPlanarRotation
from hyperlat.planar_map import (PlanarMap, apex_multigraph, build_from_rotation, components_after_removal,
                                 induced_components, induced_submap)
from hyperlat.tessellation import build_ball


def wheel(k=6):
    rot = {0: list(range(1, k + 1))}
    for i in range(1, k + 1):
        prev = (i - 2) % k + 1
        nxt = i % k + 1
        rot[i] = [0, prev, nxt]
    return build_from_rotation(rot, 0)


def test_triangle():
    m = build_from_rotation({0: [1, 2], 1: [2, 0], 2: [0, 1]}, 0)
    assert (m.n_vertices, m.n_edges, m.n_faces) == (3, 3, 2)
    assert sorted(f.degree for f in m.faces()) == [3, 3]


def test_single_vertex():
    m = build_from_rotation({0: []}, 0)
    assert (m.n_vertices, m.n_edges, m.n_faces) == (1, 0, 1)


def test_single_edge_is_one_face_of_degree_two():
    m = build_from_rotation({0: [1], 1: [0]}, 0)
    faces = m.faces()
    assert len(faces) == 1
    assert faces[0].degree == 2


def test_hexagonal_wheel():
    m = wheel()
    assert (m.n_vertices, m.n_edges, m.n_faces) == (7, 12, 7)
    degs = sorted(f.degree for f in m.faces() if not f.is_outer)
    assert degs == [3] * 6
    outer = [f for f in m.faces() if f.is_outer]
    assert len(outer) == 1 and outer[0].degree == 6
    assert m.outer_vertices == frozenset(range(1, 7))


def test_faces_partition_arcs():
    m = wheel(7)
    arcs = sorted(a for f in m.faces() for a in f.arcs)
    assert arcs == list(range(2 * m.n_edges))


def test_nonplanar_rotation_rejected():
    # K4 with a rotation that does not come from a plane drawing
    rot = {0: [1, 2, 3], 1: [0, 2, 3], 2: [0, 1, 3], 3: [0, 1, 2]}
    with pytest.raises(NonPlanarRotation):
        build_from_rotation(rot, 0)


def test_disconnected_rejected():
    with pytest.raises(Disconnected):
        build_from_rotation({0: [1], 1: [0], 2: [3], 3: [2]}, 0)


def test_asymmetric_and_parallel_rejected():
    with pytest.raises(MapError):
        build_from_rotation({0: [1], 1: []}, 0)
    with pytest.raises(MapError):
        build_from_rotation({0: [1, 1], 1: [0, 0]}, 0)
    with pytest.raises(MapError):
        build_from_rotation({0: [0]}, 0)


def test_induced_submap_examples():
    m = wheel()
    full = induced_submap(m, range(7))
    assert (full.n_vertices, full.n_edges, full.n_faces) == (7, 12, 7)
    single = induced_submap(m, {0})
    assert (single.n_vertices, single.n_faces) == (1, 1)
    cycle = induced_submap(m, range(1, 7), root=1)
    assert (cycle.n_vertices, cycle.n_edges, cycle.n_faces) == (6, 6, 2)
    with pytest.raises(EmptySelection):
        induced_submap(m, [])


def test_induced_components_split():
    m = wheel()
    comps = induced_components(m, {1, 3, 5})
    assert sorted(c.n_vertices for c in comps) == [1, 1, 1]


def test_components_after_removal_examples():
    m = wheel()
    (only,) = components_after_removal(m, set())
    assert only.exterior and only.vertices == frozenset(range(7))
    (center,) = components_after_removal(m, set(range(1, 7)))
    assert center.vertices == {0} and not center.exterior
    b = build_ball(6, 3, 3)
    ring = set(b.layer_vertices(2).tolist())
    comps = components_after_removal(b.map, ring)
    inner = [c for c in comps if not c.exterior]
    outer = [c for c in comps if c.exterior]
    assert len(inner) == 1 and inner[0].vertices == frozenset(b.ball_vertices(1).tolist())
    assert len(outer) == 1 and outer[0].vertices == frozenset(b.layer_vertices(3).tolist())


def test_json_round_trip(tmp_path):
    b = build_ball(7, 3, 2)
    path = tmp_path / "m.json"
    b.map.save(path)
    data = json.loads(path.read_text())
    assert data["schema_version"] == 1
    assert set(data) >= {"vertices", "root", "outer_arc"}
    m2 = PlanarMap.load(path)
    assert np.array_equal(m2.offsets, b.map.offsets)
    assert np.array_equal(m2.targets, b.map.targets)
    assert m2.face_degrees()[m2.outer_face] == b.map.face_degrees()[b.map.outer_face]


def test_loader_validates():
    data = wheel().to_dict()
    data["vertices"][0]["neighbors_cyclic"] = [1, 2, 3, 4, 6, 5]
    with pytest.raises(MapError):
        PlanarMap.from_dict(data)


def test_apex_multigraph_over_outer_face():
    m = wheel()
    apexed = apex_multigraph(m, m.outer_face)
    assert apexed.n_vertices == 8
    assert apexed.n_edges == 18
    assert all(d == 3 for d in apexed.face_degrees())


def test_apex_multigraph_bridge_face():
    m = build_from_rotation({0: [1], 1: [0, 2], 2: [1]}, 0)
    apexed = apex_multigraph(m, m.outer_face)
    # the walk visits the middle vertex twice, so the apex gets a double edge to it
    assert apexed.n_edges == 2 + 4
    assert all(d == 3 for d in apexed.face_degrees())


@st.composite
def ball_subsets(draw):
    d, g = draw(st.sampled_from([(6, 3), (7, 3), (4, 4), (5, 4)]))
    r = draw(st.integers(1, 3))
    b = build_ball(d, g, r)
    mask = draw(st.lists(st.booleans(), min_size=b.n_vertices, max_size=b.n_vertices))
    sel = [v for v in range(b.n_vertices) if mask[v]] or [0]
    return b, sel


@settings(max_examples=40, deadline=None)
@given(ball_subsets())
def test_euler_and_handshake_on_induced_components(bs):
    b, sel = bs
    for comp in induced_components(b.map, sel):
        assert comp.n_vertices - comp.n_edges + comp.n_faces == 2
        assert int(comp.face_degrees().sum()) == 2 * comp.n_edges
        parts = components_after_removal(comp, set())
        assert len(parts) == 1 and len(parts[0].vertices) == comp.n_vertices
