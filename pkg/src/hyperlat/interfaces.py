"""Outer interfaces and outer boundaries of finite clusters.

For a finite connected cluster ``C`` containing the root of a patch:

* ``C_inf`` is everything outside ``C`` lying in the unbounded face of the
  drawing of ``C``.  Two vertices outside ``C`` lie in the same face of ``C``
  exactly when they are joined by a path of vertices outside ``C`` in which
  consecutive vertices share an edge or a bounded face of the host, so
  ``C_inf`` is the union of such "cofacial" components that reach the rim.
* ``M`` (outer interface) = vertices of ``C`` sharing a face with ``C_inf``.
* ``B`` (outer boundary) = vertices of ``C_inf`` adjacent to ``C``.
* ``B_o`` = vertices of ``B`` adjacent to the rim-reaching part of ``host - B``.
* holes = vertices outside ``C`` and ``C_inf``; ``K = C + holes`` is the
  component of the root in ``host - B``.

A component reaches the rim iff it contains a vertex deeper than every vertex
of the removed set, which keeps all searches local.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable

import numpy as np

from .errors import (BudgetExceeded, EmptySelection, NotAnInterface, NotTriangulable,
                     RegimeMismatch, TooCloseToRim)
from .isoperimetry import AlphaLinear, Inequality, quad_layer_coefficient, volume_bound
from .planar_map import PlanarMap, apex_multigraph, build_from_rotation, induced_submap


class _Infinite:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "INFINITE"

    def __bool__(self):
        return True


INFINITE = _Infinite()


def host_of(patch) -> PlanarMap:
    return patch if isinstance(patch, PlanarMap) else patch.map


# -- searches ---------------------------------------------------------------------


def _escape_labels(nbrs, layers, removed, seeds, depth) -> dict[int, bool]:
    """Label every seed (and whatever the searches touch) as escaping or enclosed.

    ``nbrs`` gives the adjacency used for connectivity, ``removed`` the deleted
    vertex set, ``depth`` the largest layer of the removed set: reaching a
    deeper vertex means reaching the rim.  Enclosed components are explored
    completely, escaping ones only until the first deep vertex.
    """
    label: dict[int, bool] = {}
    for s in seeds:
        if s in label:
            continue
        visited = [s]
        seen = {s}
        heap = [(-int(layers[s]), s)]
        escaped = False
        while heap:
            neg, v = heapq.heappop(heap)
            if -neg > depth or label.get(v) is True:
                escaped = True
                break
            for u in nbrs[v]:
                if u not in seen and u not in removed:
                    seen.add(u)
                    visited.append(u)
                    heapq.heappush(heap, (-int(layers[u]), u))
        for v in visited:
            label[v] = escaped
    return label


def outer_region_near(host: PlanarMap, X: frozenset[int] | set[int]) -> dict[int, bool]:
    """Escape labels for vertices sharing a face with ``X`` (cofacial connectivity)."""
    layers = host.layers
    depth = max(int(layers[v]) for v in X)
    if depth > host.rim_layer - 2:
        raise TooCloseToRim(f"set reaches layer {depth}, rim is layer {host.rim_layer}")
    cof = host.cofacial
    seeds = sorted({u for v in X for u in cof[v] if u not in X})
    return _escape_labels(cof, layers, X, seeds, depth)


def minimal_cut_part(host: PlanarMap, B: frozenset[int]) -> frozenset[int]:
    """Vertices of ``B`` adjacent to a rim-reaching component of ``host - B``."""
    layers = host.layers
    adj = host.adjacency
    depth = max(int(layers[v]) for v in B)
    seeds = sorted({u for b in B for u in adj[b] if u not in B})
    label = _escape_labels(adj, layers, B, seeds, depth)
    return frozenset(b for b in B if any(label[u] for u in adj[b] if u not in B))


# -- pairs ------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class InterfacePair:
    host: PlanarMap = field(repr=False)
    cluster: frozenset[int]
    M: frozenset[int]
    B: frozenset[int]
    B_o: frozenset[int]
    holes: frozenset[int]

    @property
    def n(self) -> int:
        return len(self.B)

    @property
    def m(self) -> int:
        return len(self.M)

    @cached_property
    def K(self) -> frozenset[int]:
        """Component of the root in host - B."""
        return self.cluster | self.holes

    @property
    def k(self) -> int:
        return len(self.K)

    @property
    def key(self) -> tuple[frozenset[int], frozenset[int]]:
        return (self.M, self.B)

    def C_inf(self) -> frozenset[int]:
        return frozenset(range(self.host.n_vertices)) - self.K

    def same_pair(self, other: "InterfacePair") -> bool:
        return self.M == other.M and self.B == other.B

    def counts(self) -> tuple[int, int, int, int]:
        return (self.m, self.n, len(self.B_o), self.k)


def _check_cluster(host: PlanarMap, C: frozenset[int]) -> None:
    if not C:
        raise EmptySelection("empty cluster")
    if host.root not in C:
        raise NotAnInterface("cluster does not contain the root")
    adj = host.adjacency
    seen = {host.root}
    stack = [host.root]
    while stack:
        v = stack.pop()
        for u in adj[v]:
            if u in C and u not in seen:
                seen.add(u)
                stack.append(u)
    if len(seen) != len(C):
        raise NotAnInterface("cluster is not connected")


def interface_of(cluster: Iterable[int], patch, check: bool = True) -> InterfacePair:
    """Outer interface, outer boundary and minimal-cut part of a finite cluster."""
    host = host_of(patch)
    C = frozenset(int(v) for v in cluster)
    if check:
        _check_cluster(host, C)
    label = outer_region_near(host, C)
    adj = host.adjacency
    cof = host.cofacial
    B = frozenset(u for c in C for u in adj[c] if u not in C and label[u])
    M = frozenset(c for c in C if any(label.get(u, False) for u in cof[c] if u not in C))
    holes = frozenset(v for v, esc in label.items() if not esc)
    B_o = minimal_cut_part(host, B)
    return InterfacePair(host, C, M, B, B_o, holes)


def occupied_cluster(instance, patch=None):
    """Occupied cluster of the root; ``INFINITE`` if it reaches the outermost layer."""
    host = host_of(patch if patch is not None else instance.patch)
    occ = np.asarray(instance.occupancy, dtype=bool)
    o = host.root
    if not occ[o]:
        return frozenset()
    layers = host.layers
    rim = host.rim_layer
    adj = host.adjacency
    seen = {o}
    stack = [o]
    while stack:
        v = stack.pop()
        if layers[v] >= rim:
            return INFINITE
        for u in adj[v]:
            if occ[u] and u not in seen:
                seen.add(u)
                stack.append(u)
    return frozenset(seen)


def _component_avoiding(adj, start: int, blocked, limit: int | None = None) -> set[int] | None:
    seen = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        for u in adj[v]:
            if u not in seen and u not in blocked:
                seen.add(u)
                if limit is not None and len(seen) > limit:
                    return None
                stack.append(u)
    return seen


def reconstruct(patch, *, M: Iterable[int] | None = None, B: Iterable[int] | None = None) -> InterfacePair:
    """Recover the full pair from its outer boundary or from its outer interface."""
    host = host_of(patch)
    if (M is None) == (B is None):
        raise ValueError("give exactly one of M or B")
    if B is not None:
        return _from_boundary(host, frozenset(B))
    M = frozenset(M)
    if not M:
        raise NotAnInterface("empty interface")
    label = outer_region_near(host, M)
    adj = host.adjacency
    Bm = frozenset(u for c in M for u in adj[c] if u not in M and label[u])
    if not Bm:
        raise NotAnInterface("interface has no outer boundary")
    pair = _from_boundary(host, Bm)
    if pair.M != M:
        raise NotAnInterface("set is not the outer interface of its own boundary")
    return pair


def _from_boundary(host: PlanarMap, B: frozenset[int]) -> InterfacePair:
    if not B:
        raise NotAnInterface("empty boundary")
    o = host.root
    if o in B:
        raise NotAnInterface("boundary contains the root")
    adj = host.adjacency
    layers = host.layers
    depth = max(int(layers[b]) for b in B)
    K = _component_avoiding(adj, o, B)
    if max(int(layers[v]) for v in K) > depth:
        raise NotAnInterface("boundary does not separate the root from the rim")
    if depth > host.rim_layer - 1:
        raise TooCloseToRim("boundary reaches the rim")
    boundary = frozenset(u for v in K for u in adj[v] if u not in K)
    if boundary != B:
        raise NotAnInterface("set is not the vertex boundary of the root's component")
    # K has no holes by construction, so it is its own cluster
    pair = interface_of(K, host, check=False)
    if pair.B != B or pair.holes:
        raise NotAnInterface("boundary does not arise from a cluster")
    return pair


def canonical_pair(pair: InterfacePair) -> InterfacePair:
    """The hole-free cluster ``K`` carrying the same pair."""
    if not pair.holes:
        return pair
    return interface_of(pair.K, pair.host, check=False)


# -- regime inequalities ----------------------------------------------------------


@dataclass
class RatioReport:
    regime: str
    inequalities: list[Inequality]

    @property
    def holds(self) -> bool:
        return all(i.holds for i in self.inequalities)

    @property
    def slack(self) -> dict[str, float]:
        return {i.name: float(i.slack) for i in self.inequalities}


def regime_inequalities(m: int, n: int, bo: int, regime: str, d: int) -> list[Inequality]:
    """Exact interface inequalities for counts |M| = m, |B| = n, |B_o| = bo."""
    if regime == "deg6":
        return [Inequality("M <= 2B - Bo", m, 2 * n - bo)]
    if regime == "hyper":
        a = AlphaLinear.of(0, 1, d)
        return [
            Inequality("(d-5)M <= 2B - Bo", (d - 5) * m, 2 * n - bo),
            Inequality("alpha M <= (1+alpha)Bo - alpha B", a * m, (1 + a) * bo - a * n),
            Inequality("(d-5+(d-4)alpha)M <= (2+alpha)B", ((d - 4) * a + (d - 5)) * m, (2 + a) * n),
        ]
    if regime == "quad":
        a = AlphaLinear.of(0, 1, d + 2)
        c = quad_layer_coefficient(d)
        return [
            Inequality("(d-4+(d-3)/(d-2))M <= 2B - Bo", c * m, 2 * n - bo),
            Inequality("alpha' M <= (1+alpha')Bo - alpha' B", a * m, (1 + a) * bo - a * n),
            Inequality("(alpha'+(1+alpha')c)M <= (2+alpha')B", (a + (1 + a) * c) * m, (2 + a) * n),
        ]
    raise RegimeMismatch(f"unknown regime {regime!r}")


def host_min_degree(host: PlanarMap) -> int:
    inner = host.layers < host.rim_layer
    return int(host.degrees[inner].min()) if inner.any() else int(host.degrees.min())


def host_has_triangles(host: PlanarMap) -> bool:
    inner = host.layers < host.rim_layer
    for face in host.faces():
        if not face.is_outer and face.degree == 3 and any(inner[v] for v in face.vertices):
            return True
    return False


def regime_parameter(host: PlanarMap, regime: str) -> int:
    """Minimum internal degree, after checking the host fits the regime."""
    d = host_min_degree(host)
    if regime == "deg6" and d >= 6:
        return d
    if regime == "hyper" and d >= 7:
        return d
    if regime == "quad" and d >= 5:
        if host_has_triangles(host):
            raise RegimeMismatch("quadrangulation regime forbids triangular faces")
        return d
    raise RegimeMismatch(f"host with minimum degree {d} does not fit regime {regime!r}")


def ratio_check(pair: InterfacePair, regime: str, d: int | None = None) -> RatioReport:
    if d is None:
        d = regime_parameter(pair.host, regime)
    return RatioReport(regime, regime_inequalities(pair.m, pair.n, len(pair.B_o), regime, d))


def volume_check(pair: InterfacePair) -> bool:
    return pair.k <= volume_bound(pair.n)


def sharper_volume_bound(n: int, bo: int) -> int:
    """Disc-triangulation bound on the root component when the boundary cycle is B_o."""
    return volume_bound(bo) - n


def peierls_weight(counts: dict[int, int], n: int, q) -> object:
    """sum_m b_{n,m} q^m (1-q)^n for one value of n."""
    return sum(b * q ** m * (1 - q) ** n for m, b in counts.items())


# -- triangulation and unzipping -----------------------------------------------------


def _rotation_lists(host: PlanarMap, keep: set[int]) -> dict[int, list[int]]:
    return {v: [u for u in host.adjacency[v] if u in keep] for v in keep}


def _infinite_part(host: PlanarMap, B: frozenset[int]) -> set[int]:
    """Rim-reaching vertices of host - B."""
    rim = host.rim
    out: set[int] = set()
    for r in sorted(rim):
        if r in out or r in B:
            continue
        out |= _component_avoiding(host.adjacency, r, B)
    return out


def is_disc_triangulation(T: PlanarMap) -> bool:
    if T.n_vertices < 3 or T.multigraph:
        return False
    for face in T.faces():
        if face.is_outer:
            if len(set(face.vertices)) != face.degree:
                return False
        elif face.degree != 3:
            return False
    return True


def triangulate_TMB(pair: InterfacePair, patch=None) -> PlanarMap:
    """Disc triangulation on ``B`` and the finite components of ``host - B``.

    The outer walk of the induced map is closed up into a simple cycle by
    cutting off corners at repeated vertices; bounded faces of degree > 3 are
    fanned from a vertex of ``B``.  The result has boundary cycle ``B_o``.
    """
    host = host_of(patch) if patch is not None else pair.host
    if host_min_degree(host) < 6:
        raise RegimeMismatch("triangulation needs minimum degree >= 6")
    B = pair.B
    I = _infinite_part(host, B)
    W = set(range(host.n_vertices)) - I
    rot = _rotation_lists(host, W)
    T = _map_from_lists(rot, host.root)
    rot = _fan_faces(T, rot, B)
    rot = _close_outer_walk(rot, host.root)
    T = _map_from_lists(rot, host.root)
    if not is_disc_triangulation(T):
        raise NotTriangulable("closing the outer walk did not give a disc triangulation")
    return T


def _map_from_lists(rot: dict[int, list[int]], root: int, outer=None) -> PlanarMap:
    return build_from_rotation(rot, root, outer_arc=outer)


def _fan_faces(T: PlanarMap, rot: dict[int, list[int]], B) -> dict[int, list[int]]:
    ids = T.ids.tolist()
    for face in T.faces():
        if face.is_outer or face.degree == 3:
            continue
        walk = [ids[v] for v in face.vertices]
        if len(set(walk)) != len(walk):
            raise NotTriangulable("bounded face with a repeated vertex")
        for i, hub in enumerate(walk):
            if hub not in B:
                continue
            others = walk[i + 1:] + walk[:i]
            new = others[1:-1]
            if any(u in rot[hub] for u in new):
                continue
            # seen from the hub the other corners appear counter-clockwise in walk order
            r = rot[hub]
            j = r.index(others[0])
            rot[hub] = r[:j + 1] + new + r[j + 1:]
            for a, u in enumerate(new):
                ru = rot[u]
                k = ru.index(others[a + 2])
                rot[u] = ru[:k + 1] + [hub] + ru[k + 1:]
            break
        else:
            raise NotTriangulable("no vertex of B can fan this face")
    return rot


def _close_outer_walk(rot: dict[int, list[int]], root: int) -> dict[int, list[int]]:
    while True:
        T = _map_from_lists(rot, root)
        ids = T.ids.tolist()
        walk = [ids[v] for v in T.faces()[T.outer_face].vertices] if T.n_edges else []
        seen: dict[int, int] = {}
        for v in walk:
            seen[v] = seen.get(v, 0) + 1
        repeated = [v for v, c in seen.items() if c > 1]
        if not repeated:
            return rot
        L = len(walk)
        done = False
        for i, v in enumerate(walk):
            if seen[v] < 2:
                continue
            a, b = walk[i - 1], walk[(i + 1) % L]
            if a == b or b in rot[a]:
                continue
            ra = rot[a]
            ra.insert(ra.index(v) + 1, b)
            rb = rot[b]
            rb.insert(rb.index(v), a)
            done = True
            break
        if not done:
            raise NotTriangulable("outer walk cannot be closed without multi-edges")


@dataclass
class UnzipResult:
    map: PlanarMap
    entries: list[tuple[int, tuple[int, ...]]]
    entry_ids: list[int]
    internal: frozenset[int]

    @property
    def boundary_length(self) -> int:
        return len(self.entries)


def unzip_entries(T: PlanarMap, K: frozenset[int], B: frozenset[int]) -> list[tuple[int, tuple[int, ...]]]:
    """Entries of the face walk of ``B`` around ``K``: one per run of K-neighbours."""
    index = {int(x): i for i, x in enumerate(T.ids.tolist())}
    ids = T.ids.tolist()
    runs: dict[int, list[tuple[int, ...]]] = {}
    for b in B:
        r = [ids[u] for u in T.adjacency[index[b]]]
        inK = [u in K for u in r]
        d = len(r)
        if all(inK):
            raise NotAnInterface("boundary vertex surrounded by the cluster")
        out = []
        for i in range(d):
            if inK[i] and not inK[i - 1]:
                j = i
                run = []
                while inK[j % d]:
                    run.append(r[j % d])
                    j += 1
                out.append(tuple(run))
        runs[b] = out
    owner = {}
    for b, rs in runs.items():
        for run in rs:
            for c in run:
                owner[(b, c)] = run
    entries = [(b, run) for b in sorted(runs) for run in runs[b]]
    if not entries:
        return []
    # successor: the neighbour of b after the run's last vertex, at the run holding that vertex
    succ = {}
    for b, run in entries:
        r = [ids[u] for u in T.adjacency[index[b]]]
        x = r[(r.index(run[-1]) + 1) % len(r)]
        if x not in B:
            raise NotAnInterface("run of the cluster is not closed off by the boundary")
        succ[(b, run)] = (x, owner[(x, run[-1])])
    order = [entries[0]]
    while True:
        nxt = succ[order[-1]]
        if nxt == order[0]:
            break
        order.append(nxt)
        if len(order) > len(entries):
            raise NotAnInterface("face walk does not close")
    if len(order) != len(entries):
        raise NotAnInterface("boundary walk splits into several cycles")
    return order


def unzip(T: PlanarMap, B: Iterable[int], cluster: Iterable[int]) -> UnzipResult:
    """Split boundary vertices into one copy per visit of the face walk around ``K``."""
    B = frozenset(B)
    index = {int(x): i for i, x in enumerate(T.ids.tolist())}
    ids = T.ids.tolist()
    C = frozenset(cluster)
    adj = {ids[i]: [ids[u] for u in T.adjacency[i]] for i in range(T.n_vertices)}
    K = frozenset(_component_avoiding(adj, min(C), B))
    entries = unzip_entries(T, K, B)
    L = len(entries)
    if L < 3:
        raise NotTriangulable("unzipped boundary shorter than a triangle")
    base = max(ids) + 1
    entry_ids = [base + i for i in range(L)]
    where = {}
    for i, (b, run) in enumerate(entries):
        for c in run:
            where[(b, c)] = entry_ids[i]
    rot: dict[int, list[int]] = {}
    for c in K:
        rot[c] = [where[(u, c)] if u in B else u for u in (ids[x] for x in T.adjacency[index[c]])]
    for i, (b, run) in enumerate(entries):
        rot[entry_ids[i]] = list(run) + [entry_ids[(i + 1) % L], entry_ids[i - 1]]
    root = min(K)
    H = build_from_rotation(rot, root, outer_arc=(entry_ids[0], entry_ids[1]))
    return UnzipResult(H, entries, entry_ids, K)


def validate_unzip(res: UnzipResult, T: PlanarMap, pair: InterfacePair) -> list[str]:
    """Problems found with an unzipped map (empty list when everything checks out)."""
    problems = []
    H = res.map
    if not is_disc_triangulation(H):
        problems.append("not a disc triangulation")
    hidx = {int(x): i for i, x in enumerate(H.ids.tolist())}
    tidx = {int(x): i for i, x in enumerate(T.ids.tolist())}
    for c in res.internal:
        if H.degrees[hidx[c]] != T.degrees[tidx[c]]:
            problems.append(f"degree of {c} changed")
    entry_set = set(res.entry_ids)
    near = frozenset(c for c in res.internal if any(int(H.ids[u]) in entry_set for u in H.adjacency[hidx[c]]))
    if near != pair.M:
        problems.append("interface is not the boundary of the internal vertices")
    if H.outer_vertices != frozenset(hidx[e] for e in res.entry_ids):
        problems.append("outer face is not the entry cycle")
    if res.boundary_length > 2 * pair.n - len(pair.B_o):
        problems.append("boundary longer than 2|B| - |B_o|")
    return problems


def boundary_walk_check(T: PlanarMap, pair: InterfacePair) -> dict:
    """Face of T[B] around K: walk length against 2|B| - |B_o|, via an apex vertex."""
    B = pair.B
    index = {int(x): i for i, x in enumerate(T.ids.tolist())}
    H = induced_submap(T, {index[b] for b in B})
    if H.n_vertices != len(B):
        raise NotAnInterface("boundary does not induce a connected graph")
    entries = unzip_entries(T, pair.K, B)
    b, run = entries[0]
    x = entries[1][0]
    hidx = {int(h): i for i, h in enumerate(H.ids.tolist())}
    face = int(H.face_of[H.arc_index(hidx[x], hidx[b])])
    walk = H.face_walk(face)
    apexed = apex_multigraph(H, face)
    apex = apexed.n_vertices - 1
    bo = len(pair.B_o)
    return {
        "walk_length": len(walk),
        "entries": len(entries),
        "apex_degree": int(apexed.degrees[apex]),
        "distinct": len({int(H.sources[a]) for a in walk}),
        "bound": 2 * pair.n - bo,
        "holds": len(walk) <= 2 * pair.n - bo,
    }


# -- census -----------------------------------------------------------------------------


def unzip_length(host: PlanarMap, pair: InterfacePair) -> int:
    """Number of runs of K-neighbours around the vertices of B (length of the unzipped boundary)."""
    K = pair.K
    total = 0
    for b in pair.B:
        r = host.adjacency[b]
        inK = [u in K for u in r]
        runs = sum(1 for i in range(len(r)) if inK[i] and not inK[i - 1])
        total += runs if runs or not all(inK) else 1
    return total


@dataclass
class PairCensus:
    """Pair counts for all clusters of size at most ``cap`` around the root.

    ``pairs`` maps (m, n, bo, k) to the number of distinct (M, B) pairs with
    |M| = m, |B| = n, |B_o| = bo and |K| = k; ``unzip`` maps (n, bo, L) likewise
    with L the unzipped boundary length; ``sets`` maps (|S|, |dS|) over every
    enumerated cluster S.
    """

    patch: dict
    cap: int
    n_clusters: int
    pairs: dict[tuple[int, int, int, int], int]
    unzip: dict[tuple[int, int, int], int]
    sets: dict[tuple[int, int], int]
    extremal: dict[int, tuple[int, tuple[int, ...]]]
    roundtrip_failures: int = 0
    holey_clusters: int = 0
    engine: str = "compiled"

    @property
    def n_pairs(self) -> int:
        return sum(self.pairs.values())

    def b_counts(self) -> dict[tuple[int, int], int]:
        """b_{n,m}: number of pairs with |B| = n and |M| = m."""
        out: dict[tuple[int, int], int] = {}
        for (m, n, bo, k), c in self.pairs.items():
            out[(n, m)] = out.get((n, m), 0) + c
        return out

    def to_dict(self, violations=()) -> dict:
        counts = [{"n": n, "m": m, "b": b} for (n, m), b in sorted(self.b_counts().items())]
        return {"schema_version": 1, "patch": self.patch, "cap": self.cap, "clusters": self.n_clusters,
                "pairs": self.n_pairs, "counts": counts, "violations": list(violations)}


def _patch_descriptor(patch) -> dict:
    host = host_of(patch)
    desc = {"vertices": host.n_vertices, "radius": host.rim_layer}
    for key in ("d", "g"):
        if hasattr(patch, key):
            desc[key] = int(getattr(patch, key))
    return desc


def _layer_sorted_csr(lists, layers) -> tuple[np.ndarray, np.ndarray]:
    off = np.zeros(len(lists) + 1, dtype=np.int64)
    np.cumsum([len(x) for x in lists], out=off[1:])
    flat = np.empty(int(off[-1]), dtype=np.int64)
    for v, x in enumerate(lists):
        flat[off[v]:off[v + 1]] = sorted(x, key=lambda u: (int(layers[u]), u))
    return off, flat


def _check_census_radius(host: PlanarMap, cap: int) -> None:
    if cap < 1:
        raise ValueError("cluster cap must be positive")
    if cap - 1 > host.rim_layer - 2:
        raise TooCloseToRim(f"clusters of size {cap} need a patch of radius >= {cap + 1}")


def enumerate_pairs(patch, cluster_size_max: int, engine: str = "compiled",
                    max_clusters: int = 200_000_000) -> PairCensus:
    """Census of (M, B) pairs over connected clusters of size <= cap containing the root."""
    host = host_of(patch)
    cap = int(cluster_size_max)
    _check_census_radius(host, cap)
    if engine == "python":
        return _python_census(patch, cap, max_clusters)
    if engine != "compiled":
        raise ValueError(f"unknown engine {engine!r}")
    from .census import HOLEY, OVERFLOW, ROUNDTRIP_FAIL, SETS, census_kernel

    layers = host.layers
    adj_off, adj = host.offsets, host.targets
    cof_off, cof = _layer_sorted_csr(host.cofacial, layers)
    nmax = cap * int(host.degrees.max()) + 1
    kbuf = 1 << 16
    while True:
        ctr, h4, hL, hS, ext_m, ext_set, kb = census_kernel(
            adj_off, adj, cof_off, cof, layers.astype(np.int64), host.root, cap, cap - 1,
            nmax, kbuf, max_clusters)
        if ctr[SETS] > max_clusters:
            raise BudgetExceeded(f"more than {max_clusters} clusters")
        if ctr[OVERFLOW] == 0:
            break
        if kbuf > 1 << 28:
            raise BudgetExceeded("holey-cluster buffer overflow")
        kbuf <<= 4
    pairs = {tuple(int(x) for x in idx): int(h4[idx]) for idx in zip(*np.nonzero(h4))}
    unz = {tuple(int(x) for x in idx): int(hL[idx]) for idx in zip(*np.nonzero(hL))}
    sets = {tuple(int(x) for x in idx): int(hS[idx]) for idx in zip(*np.nonzero(hS))}
    extremal = {int(n): (int(ext_m[n]), tuple(int(v) for v in ext_set[n] if v >= 0))
                for n in np.flatnonzero(ext_m >= 0)}
    failures = int(ctr[ROUNDTRIP_FAIL])
    # big hole-filled sets: dedupe by K, evaluate in Python
    hulls = set()
    i = 0
    while i < len(kb):
        k = int(kb[i])
        hulls.add(frozenset(kb[i + 1:i + 1 + k].tolist()))
        i += 1 + k
    for K in sorted(hulls, key=sorted):
        pair = interface_of(K, host, check=False)
        if not _roundtrip_ok(host, pair):
            failures += 1
        _add_pair(pairs, unz, extremal, pair, unzip_length(host, pair))
    return PairCensus(_patch_descriptor(patch), cap, int(ctr[SETS]), pairs, unz, sets, extremal,
                      failures, int(ctr[HOLEY]), "compiled")


def _add_pair(pairs, unz, extremal, pair: InterfacePair, L: int) -> None:
    key = pair.counts()
    pairs[key] = pairs.get(key, 0) + 1
    k2 = (pair.n, len(pair.B_o), L)
    unz[k2] = unz.get(k2, 0) + 1
    if pair.m > extremal.get(pair.n, (-1, ()))[0]:
        extremal[pair.n] = (pair.m, tuple(sorted(pair.cluster)))


def _roundtrip_ok(host: PlanarMap, pair: InterfacePair) -> bool:
    try:
        return reconstruct(host, B=pair.B).same_pair(pair) and reconstruct(host, M=pair.M).same_pair(pair)
    except (NotAnInterface, TooCloseToRim):
        return False


def _python_census(patch, cap: int, max_clusters: int) -> PairCensus:
    from .oracle import enumerate_connected_subgraphs

    host = host_of(patch)
    seen: dict[tuple[frozenset[int], frozenset[int]], InterfacePair] = {}
    sets: dict[tuple[int, int], int] = {}
    n_sets = 0
    holey = 0
    for C in enumerate_connected_subgraphs(host, host.root, cap, max_sets=max_clusters):
        n_sets += 1
        pair = interface_of(C, host, check=False)
        key = (len(C), len(vertex_boundary_plain(host, C)))
        sets[key] = sets.get(key, 0) + 1
        if pair.holes:
            holey += 1
        seen.setdefault(pair.key, pair)
    pairs: dict = {}
    unz: dict = {}
    extremal: dict = {}
    failures = 0
    for key in sorted(seen, key=lambda kb: (sorted(kb[1]), sorted(kb[0]))):
        pair = canonical_pair(seen[key])
        if not _roundtrip_ok(host, pair):
            failures += 1
        _add_pair(pairs, unz, extremal, pair, unzip_length(host, pair))
    return PairCensus(_patch_descriptor(patch), cap, n_sets, pairs, unz, sets, extremal, failures, holey, "python")


def vertex_boundary_plain(host: PlanarMap, S) -> set[int]:
    adj = host.adjacency
    return {u for v in S for u in adj[v] if u not in S}


def census_violations(census: PairCensus, regime: str, d: int, triangulated: bool | None = None) -> list[dict]:
    """Every failed theorem-backed check over a census (empty when all hold)."""
    out = []
    for (m, n, bo, k), c in sorted(census.pairs.items()):
        for ineq in regime_inequalities(m, n, bo, regime, d):
            if not ineq.holds:
                out.append({"check": ineq.name, "m": m, "n": n, "bo": bo, "k": k, "count": c})
        if regime == "deg6" and k > volume_bound(n):
            out.append({"check": "volume", "m": m, "n": n, "bo": bo, "k": k, "count": c})
    if triangulated is None:
        triangulated = regime in ("deg6", "hyper")
    if triangulated:
        for (n, bo, L), c in sorted(census.unzip.items()):
            if L > 2 * n - bo:
                out.append({"check": "unzip length", "n": n, "bo": bo, "L": L, "count": c})
    if census.roundtrip_failures:
        out.append({"check": "round trip", "count": census.roundtrip_failures})
    return out


def peierls_sums(census: PairCensus, q) -> dict[int, object]:
    """n -> sum_m b_{n,m} q^m (1-q)^n over the census."""
    by_n: dict[int, dict[int, int]] = {}
    for (n, m), b in census.b_counts().items():
        by_n.setdefault(n, {})[m] = b
    return {n: peierls_weight(ms, n, q) for n, ms in sorted(by_n.items())}
