"""Finite plane graphs stored as rotation systems.

A :class:`PlanarMap` keeps, for every vertex, its neighbours in counter-clockwise
cyclic order (CSR layout: ``targets[offsets[v]:offsets[v + 1]]``).  Arc ``a`` goes
from ``sources[a]`` to ``targets[a]``.  Faces are the orbits of the permutation

    next(u -> v) = (v -> w),  w = neighbour of v preceding u in v's rotation,

so every face lies to the left of its arcs; bounded faces are walked
counter-clockwise and the outer face clockwise.  Face degree counts edge-sides,
hence a bridge contributes two to the face it sits in.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np
from scipy import sparse
from scipy.sparse.csgraph import connected_components

from .errors import Disconnected, EmptySelection, MapError, NonPlanarRotation

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class Face:
    index: int
    arcs: tuple[int, ...]
    vertices: tuple[int, ...]
    is_outer: bool

    @property
    def degree(self) -> int:
        return len(self.arcs)


@dataclass(frozen=True)
class Component:
    vertices: frozenset[int]
    exterior: bool


def bfs_layers(offsets: np.ndarray, targets: np.ndarray, sources) -> np.ndarray:
    """Graph distance from ``sources`` to every vertex (-1 where unreachable)."""
    n = len(offsets) - 1
    dist = np.full(n, -1, dtype=np.int64)
    frontier = np.unique(np.asarray(sources, dtype=np.int64))
    dist[frontier] = 0
    level = 0
    while frontier.size:
        starts = offsets[frontier]
        lens = offsets[frontier + 1] - starts
        total = int(lens.sum())
        if total == 0:
            break
        idx = np.arange(total) - np.repeat(np.cumsum(lens) - lens, lens) + np.repeat(starts, lens)
        nb = targets[idx]
        nb = np.unique(nb[dist[nb] < 0])
        level += 1
        dist[nb] = level
        frontier = nb
    return dist


class PlanarMap:
    """Connected plane graph given by a rotation system.

    Parameters
    ----------
    offsets, targets:
        CSR rotation system; ``targets[offsets[v]:offsets[v+1]]`` lists the
        neighbours of ``v`` counter-clockwise.
    root:
        Internal index of the root vertex.
    outer_arc:
        ``(u, v)`` pair (internal indices) or arc index lying on the unbounded
        face.  When omitted the face of largest degree is taken.
    ids:
        External vertex ids, defaults to ``0..V-1``.
    twin, multigraph:
        Auxiliary multigraph mode.  Parallel edges are only accepted with
        ``multigraph=True`` and an explicit arc pairing ``twin``.
    """

    def __init__(
        self,
        offsets,
        targets,
        root: int = 0,
        outer_arc=None,
        ids=None,
        twin=None,
        multigraph: bool = False,
    ):
        self.offsets = np.ascontiguousarray(offsets, dtype=np.int64)
        self.targets = np.ascontiguousarray(targets, dtype=np.int64)
        self.multigraph = multigraph
        n = len(self.offsets) - 1
        if n < 1:
            raise MapError("a map needs at least one vertex")
        if self.offsets[0] != 0 or self.offsets[-1] != len(self.targets) or np.any(np.diff(self.offsets) < 0):
            raise MapError("malformed CSR offsets")
        if not 0 <= root < n:
            raise MapError(f"root {root} out of range")
        self.root = int(root)
        self.ids = np.arange(n, dtype=np.int64) if ids is None else np.asarray(ids, dtype=np.int64)
        self.sources = np.repeat(np.arange(n, dtype=np.int64), np.diff(self.offsets))
        if len(self.targets) and (self.targets.min() < 0 or self.targets.max() >= n):
            raise MapError("neighbour index out of range")
        if np.any(self.sources == self.targets):
            raise MapError("loops are not allowed")
        self.twin = self._pair_arcs(twin)
        self._check_connected()
        self.next_arc = self._face_permutation()
        self.face_of, n_orbits = self._label_faces()
        self.n_faces = n_orbits if len(self.targets) else 1
        if self.n_vertices - self.n_edges + self.n_faces != 2:
            raise NonPlanarRotation(
                f"V - E + F = {self.n_vertices} - {self.n_edges} + {self.n_faces} != 2"
            )
        self.outer_arc = self._resolve_outer_arc(outer_arc)
        self.outer_face = 0 if self.outer_arc is None else int(self.face_of[self.outer_arc])

    # -- construction helpers -------------------------------------------------

    def _pair_arcs(self, twin) -> np.ndarray:
        n = self.n_vertices
        src, dst = self.sources, self.targets
        if twin is not None:
            if not self.multigraph:
                raise MapError("explicit arc pairing is only used in multigraph mode")
            twin = np.asarray(twin, dtype=np.int64)
            ok = (
                len(twin) == len(dst)
                and np.array_equal(twin[twin], np.arange(len(dst)))
                and np.array_equal(src[twin], dst)
                and np.array_equal(dst[twin], src)
            )
            if not ok:
                raise MapError("arc pairing is not an involution reversing arcs")
            return twin
        key = src * n + dst
        order = np.argsort(key, kind="stable")
        skey = key[order]
        if len(skey) > 1 and np.any(skey[1:] == skey[:-1]):
            raise MapError("parallel edges require multigraph mode")
        rkey = dst * n + src
        pos = np.searchsorted(skey, rkey)
        pos = np.minimum(pos, max(len(skey) - 1, 0))
        if len(skey) and not np.array_equal(skey[pos], rkey):
            raise MapError("rotation system is not symmetric")
        self._sorted_keys = skey
        self._key_order = order
        return order[pos] if len(skey) else np.zeros(0, dtype=np.int64)

    def _check_connected(self) -> None:
        if self.n_vertices == 1:
            return
        dist = bfs_layers(self.offsets, self.targets, [self.root])
        if np.any(dist < 0):
            raise Disconnected(f"{int(np.sum(dist < 0))} vertices unreachable from the root")
        self._root_dist = dist

    def _face_permutation(self) -> np.ndarray:
        dst = self.targets
        deg = np.diff(self.offsets)
        pos = self.twin - self.offsets[dst]
        return self.offsets[dst] + (pos - 1) % np.maximum(deg[dst], 1)

    def _label_faces(self) -> tuple[np.ndarray, int]:
        m = len(self.targets)
        if m == 0:
            return np.zeros(0, dtype=np.int64), 0
        graph = sparse.csr_matrix((np.ones(m, dtype=np.int8), (np.arange(m), self.next_arc)), shape=(m, m))
        n_orbits, labels = connected_components(graph, directed=True, connection="weak")
        # relabel so that faces are numbered by their lowest arc id
        _, first = np.unique(labels, return_index=True)
        rank = np.empty(n_orbits, dtype=np.int64)
        rank[np.argsort(first, kind="stable")] = np.arange(n_orbits)
        return rank[labels], int(n_orbits)

    def _resolve_outer_arc(self, outer_arc):
        if len(self.targets) == 0:
            return None
        if outer_arc is None:
            sizes = np.bincount(self.face_of)
            label = int(np.argmax(sizes))
            return int(np.flatnonzero(self.face_of == label)[0])
        if isinstance(outer_arc, (int, np.integer)):
            return int(outer_arc)
        u, v = outer_arc
        return self.arc_index(int(u), int(v))

    # -- basic queries ----------------------------------------------------------

    @property
    def n_vertices(self) -> int:
        return len(self.offsets) - 1

    @property
    def n_edges(self) -> int:
        return len(self.targets) // 2

    @cached_property
    def degrees(self) -> np.ndarray:
        return np.diff(self.offsets)

    def neighbors(self, v: int) -> np.ndarray:
        return self.targets[self.offsets[v]:self.offsets[v + 1]]

    def arc_index(self, u: int, v: int) -> int:
        if self.multigraph:
            hits = np.flatnonzero(self.neighbors(u) == v)
            if not len(hits):
                raise MapError(f"no arc {u}->{v}")
            return int(self.offsets[u] + hits[0])
        key = u * self.n_vertices + v
        pos = int(np.searchsorted(self._sorted_keys, key))
        if pos >= len(self._sorted_keys) or self._sorted_keys[pos] != key:
            raise MapError(f"no arc {u}->{v}")
        return int(self._key_order[pos])

    @cached_property
    def adjacency(self) -> list[tuple[int, ...]]:
        t = self.targets.tolist()
        o = self.offsets.tolist()
        return [tuple(t[o[v]:o[v + 1]]) for v in range(self.n_vertices)]

    @cached_property
    def layers(self) -> np.ndarray:
        """Graph distance from the root."""
        if self.n_vertices == 1:
            return np.zeros(1, dtype=np.int64)
        return self._root_dist

    @cached_property
    def rim_layer(self) -> int:
        return int(self.layers.max())

    @cached_property
    def rim(self) -> frozenset[int]:
        """Outermost layer: vertices at maximal distance from the root."""
        return frozenset(np.flatnonzero(self.layers == self.rim_layer).tolist())

    # -- faces --------------------------------------------------------------------

    def face_degrees(self) -> np.ndarray:
        if len(self.targets) == 0:
            return np.zeros(1, dtype=np.int64)
        return np.bincount(self.face_of, minlength=self.n_faces)

    def face_walk(self, label: int) -> list[int]:
        """Arcs of a face in traversal order, starting from its lowest arc."""
        if len(self.targets) == 0:
            return []
        start = int(np.flatnonzero(self.face_of == label)[0])
        walk = [start]
        a = int(self.next_arc[start])
        while a != start:
            walk.append(a)
            a = int(self.next_arc[a])
        return walk

    def faces(self) -> list[Face]:
        if len(self.targets) == 0:
            return [Face(0, (), (self.root,), True)]
        nxt = self.next_arc.tolist()
        src = self.sources.tolist()
        seen = bytearray(len(nxt))
        out = []
        for start in range(len(nxt)):
            if seen[start]:
                continue
            walk = []
            a = start
            while not seen[a]:
                seen[a] = 1
                walk.append(a)
                a = nxt[a]
            label = int(self.face_of[start])
            out.append(Face(label, tuple(walk), tuple(src[x] for x in walk), label == self.outer_face))
        return out

    @cached_property
    def outer_vertices(self) -> frozenset[int]:
        if len(self.targets) == 0:
            return frozenset([self.root])
        return frozenset(self.sources[self.face_of == self.outer_face].tolist())

    @cached_property
    def cofacial(self) -> list[tuple[int, ...]]:
        """Vertices sharing an edge or a bounded face with each vertex."""
        sets = [set(nb) for nb in self.adjacency]
        for face in self.faces():
            if face.is_outer:
                continue
            vs = set(face.vertices)
            for v in vs:
                sets[v] |= vs
        for v, s in enumerate(sets):
            s.discard(v)
        return [tuple(sorted(s)) for s in sets]

    def cofacial_csr(self) -> tuple[np.ndarray, np.ndarray]:
        lens = np.fromiter((len(c) for c in self.cofacial), dtype=np.int64, count=self.n_vertices)
        off = np.zeros(self.n_vertices + 1, dtype=np.int64)
        np.cumsum(lens, out=off[1:])
        flat = np.fromiter((u for c in self.cofacial for u in c), dtype=np.int64, count=int(off[-1]))
        return off, flat

    def check_invariants(self) -> None:
        """Re-assert Euler's formula and the face-degree handshake."""
        assert self.n_vertices - self.n_edges + self.n_faces == 2
        if len(self.targets):
            assert int(self.face_degrees().sum()) == 2 * self.n_edges
            assert np.array_equal(self.twin[self.twin], np.arange(len(self.targets)))

    # -- interchange --------------------------------------------------------------

    def to_dict(self) -> dict:
        ids = self.ids.tolist()
        verts = [
            {"id": ids[v], "neighbors_cyclic": [ids[u] for u in self.neighbors(v).tolist()]}
            for v in range(self.n_vertices)
        ]
        out = {"schema_version": SCHEMA_VERSION, "vertices": verts, "root": ids[self.root]}
        if self.outer_arc is not None:
            out["outer_arc"] = [ids[int(self.sources[self.outer_arc])], ids[int(self.targets[self.outer_arc])]]
        else:
            out["outer_arc"] = None
        return out

    @classmethod
    def from_dict(cls, data: Mapping) -> "PlanarMap":
        rotation = {int(v["id"]): [int(u) for u in v["neighbors_cyclic"]] for v in data["vertices"]}
        return build_from_rotation(rotation, int(data["root"]), outer_arc=data.get("outer_arc"))

    def save(self, path, **extra) -> None:
        payload = self.to_dict()
        payload.update(extra)
        Path(path).write_text(json.dumps(payload))

    @classmethod
    def load(cls, path) -> "PlanarMap":
        return cls.from_dict(json.loads(Path(path).read_text()))

    def __repr__(self) -> str:
        return f"PlanarMap(V={self.n_vertices}, E={self.n_edges}, F={self.n_faces}, root={self.root})"


def build_from_rotation(rotation, root: int, outer_arc=None) -> PlanarMap:
    """Build a map from ``{id: [neighbour ids counter-clockwise]}`` (or a list).

    Ids are arbitrary integers; they are kept as ``map.ids`` and relabelled to
    ``0..V-1`` internally in sorted order.
    """
    if isinstance(rotation, Mapping):
        items = sorted(rotation.items())
    else:
        items = list(enumerate(rotation))
    ids = [k for k, _ in items]
    index = {k: i for i, k in enumerate(ids)}
    if len(index) != len(ids):
        raise MapError("duplicate vertex ids")
    try:
        flat = [index[u] for _, nbrs in items for u in nbrs]
        r = index[root]
        arc = None if outer_arc is None else (index[outer_arc[0]], index[outer_arc[1]])
    except KeyError as exc:
        raise MapError(f"unknown vertex id {exc.args[0]}") from None
    offsets = np.zeros(len(items) + 1, dtype=np.int64)
    np.cumsum([len(n) for _, n in items], out=offsets[1:])
    return PlanarMap(offsets, np.asarray(flat, dtype=np.int64), root=r, outer_arc=arc, ids=ids)


def _sector_face_arc(host: PlanarMap, inside: set[int] | frozenset[int], c: int, k: int) -> tuple[int, int]:
    """Arc ``(b, c)`` of the submap on ``inside`` whose face contains host arc ``c -> k``.

    ``k`` is outside the vertex set; ``b`` is the first neighbour of ``c`` that is
    inside the set when turning counter-clockwise from ``k``.
    """
    rot = host.adjacency[c]
    i = rot.index(k)
    d = len(rot)
    for step in range(1, d):
        b = rot[(i + step) % d]
        if b in inside:
            return b, c
    raise ValueError("vertex has no neighbour inside the set")


def _components(adj: Sequence[Iterable[int]], allowed) -> list[list[int]]:
    seen = set()
    comps = []
    for s in sorted(allowed):
        if s in seen:
            continue
        seen.add(s)
        comp = [s]
        queue = deque([s])
        while queue:
            v = queue.popleft()
            for u in adj[v]:
                if u in allowed and u not in seen:
                    seen.add(u)
                    comp.append(u)
                    queue.append(u)
        comps.append(comp)
    return comps


def _submap(host: PlanarMap, comp: Sequence[int], root: int) -> PlanarMap:
    comp = sorted(comp)
    inside = set(comp)
    local = {v: i for i, v in enumerate(comp)}
    rot = [[local[u] for u in host.adjacency[v] if u in inside] for v in comp]
    offsets = np.zeros(len(comp) + 1, dtype=np.int64)
    np.cumsum([len(r) for r in rot], out=offsets[1:])
    targets = np.asarray([u for r in rot for u in r], dtype=np.int64)
    outer = None
    if len(targets):
        outer = _submap_outer_arc(host, inside)
        outer = (local[outer[0]], local[outer[1]])
    return PlanarMap(offsets, targets, root=local[root], outer_arc=outer, ids=host.ids[comp])


def _submap_outer_arc(host: PlanarMap, inside: set[int]) -> tuple[int, int]:
    outer_arcs = np.flatnonzero(host.face_of == host.outer_face) if len(host.targets) else []
    for a in outer_arcs.tolist():
        u, v = int(host.sources[a]), int(host.targets[a])
        if u in inside and v in inside:
            return u, v
    # walk from a host outer-face vertex outside the set until touching it
    start = min(host.outer_vertices - inside)
    seen = {start}
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for u in host.adjacency[x]:
            if u in inside:
                return _sector_face_arc(host, inside, u, x)
            if u not in seen:
                seen.add(u)
                queue.append(u)
    raise Disconnected("selection is not reachable from the outer face")


def induced_components(host: PlanarMap, selection: Iterable[int]) -> list[PlanarMap]:
    """Induced submap of every component of ``selection`` (each with its own outer face)."""
    sel = set(selection)
    if not sel:
        raise EmptySelection("empty vertex selection")
    return [_submap(host, comp, comp[0] if host.root not in comp else host.root)
            for comp in _components(host.adjacency, sel)]


def induced_submap(host: PlanarMap, selection: Iterable[int], root: int | None = None) -> PlanarMap:
    """Component of the induced submap containing ``root`` (default: host root, else min)."""
    sel = set(selection)
    if not sel:
        raise EmptySelection("empty vertex selection")
    if root is None:
        root = host.root if host.root in sel else min(sel)
    if root not in sel:
        raise EmptySelection(f"root {root} not selected")
    comp = _components(host.adjacency, sel & _reach(host.adjacency, root, sel))[0]
    return _submap(host, comp, root)


def _reach(adj, start: int, allowed) -> set[int]:
    seen = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        for u in adj[v]:
            if u in allowed and u not in seen:
                seen.add(u)
                stack.append(u)
    return seen


def components_after_removal(host: PlanarMap, removed: Iterable[int]) -> list[Component]:
    """Components of ``host - removed``; exterior ones touch the host's outer face."""
    rem = set(removed)
    rest = set(range(host.n_vertices)) - rem
    outer = host.outer_vertices
    return [Component(frozenset(c), not outer.isdisjoint(c)) for c in _components(host.adjacency, rest)]


def apex_multigraph(host: PlanarMap, face: int) -> PlanarMap:
    """Insert a new vertex inside ``face`` joined to every corner of its walk.

    A vertex visited several times by the walk gets one edge per visit, so the
    result lives in multigraph mode.  The new vertex gets index ``host.n_vertices``.
    """
    walk = host.face_walk(face)
    if not walk:
        raise ValueError("cannot place an apex in an arc-less face")
    n = host.n_vertices
    apex = n
    rot = [[(u, -1) for u in host.adjacency[v]] for v in range(n)]
    corners = []
    for j, a in enumerate(walk):
        u, v = int(host.sources[a]), int(host.targets[a])
        # the face sector at v ends at u (counter-clockwise), so the new arc goes just before u
        rot[v].insert(rot[v].index((u, -1)), (apex, j))
        corners.append(v)
    rot.append([(v, j) for j, v in enumerate(corners)])
    offsets = np.zeros(n + 2, dtype=np.int64)
    np.cumsum([len(r) for r in rot], out=offsets[1:])
    targets = np.asarray([t for r in rot for t, _ in r], dtype=np.int64)
    where = {}
    for v, r in enumerate(rot):
        for k, (t, tag) in enumerate(r):
            where[(v, t, tag)] = int(offsets[v]) + k
    twin = np.asarray([where[(t, v, tag)] for (v, t, tag) in where], dtype=np.int64)
    return PlanarMap(offsets, targets, root=host.root, twin=twin, multigraph=True)
