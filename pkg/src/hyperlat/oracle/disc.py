"""Exhaustive generation of small disc triangulations.

A disc triangulation is grown from its boundary cycle ``0, 1, ..., n-1``
(counter-clockwise, interior on the left).  Open polygons are regions still to
be triangulated.  The first edge ``a -> b`` of the last open polygon lies on
exactly one triangle of the finished triangulation, whose apex is either a
polygon vertex (the polygon splits in two) or a fresh internal vertex.  Given the
boundary labelling every triangulation is therefore produced exactly once, and
isomorphism classes are separated by a canonical code minimised over the ``2n``
boundary rootings of both orientations.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from ..errors import BudgetExceeded
from ..planar_map import build_from_rotation, induced_components

N_BOUNDARY_LIMIT = 10
K_LIMIT = 16


@dataclass(eq=False)
class DiscTriangulation:
    n: int
    k: int
    triangles: tuple = field(repr=False)
    rotation: dict = field(repr=False)
    code: tuple = field(repr=False)

    @property
    def boundary(self) -> list[int]:
        return list(range(self.n))

    @property
    def internal(self) -> list[int]:
        return list(range(self.n, self.k))

    @cached_property
    def map(self):
        return build_from_rotation(self.rotation, root=0, outer_arc=(1, 0) if self.n > 1 else None)

    def degree(self, v: int) -> int:
        return len(self.rotation[v])

    @cached_property
    def hull_boundary(self) -> list[int]:
        """Internal vertices adjacent to the boundary cycle."""
        return [v for v in self.internal if any(u < self.n for u in self.rotation[v])]

    @cached_property
    def hull_length(self) -> int:
        """Total boundary length of the triangulation induced by the internal vertices.

        Edges induced by its boundary vertices count once, or twice when they lie
        on no triangular face of the induced triangulation.
        """
        inner_edges = set()
        for t in self.triangles:
            if min(t) >= self.n:
                a, b, c = t
                inner_edges.update((frozenset((a, b)), frozenset((b, c)), frozenset((a, c))))
        hull = set(self.hull_boundary)
        total = 0
        for v in hull:
            for u in self.rotation[v]:
                if u in hull and u > v:
                    total += 1 if frozenset((u, v)) in inner_edges else 2
        return total

    @cached_property
    def hull_walk_length(self) -> int:
        """Summed unbounded-face degrees of the internal components (0 for a single vertex)."""
        if self.k == self.n:
            return 0
        return sum(int(c.face_degrees()[c.outer_face]) for c in induced_components(self.map, self.internal))

    def internal_connected(self) -> bool:
        inner = set(self.internal)
        if not inner:
            return False
        start = next(iter(inner))
        seen = {start}
        stack = [start]
        while stack:
            v = stack.pop()
            for u in self.rotation[v]:
                if u in inner and u not in seen:
                    seen.add(u)
                    stack.append(u)
        return seen == inner

    def cut_sizes(self) -> tuple[int, int, int]:
        """(|X|, |Y|, |Z|) with X the boundary cycle, Y the internal vertices next to it."""
        y = len(self.hull_boundary)
        return self.n, y, self.k - self.n - y


def _rotation(n, k, triangles):
    succ = [dict() for _ in range(k)]
    for a, b, c in triangles:
        succ[a][b] = c
        succ[b][c] = a
        succ[c][a] = b
    rot = {}
    for v in range(k):
        if v < n:
            start = (v + 1) % n
            order = [start]
            while order[-1] in succ[v]:
                order.append(succ[v][order[-1]])
        else:
            start = min(succ[v])
            order = [start]
            while succ[v][order[-1]] != start:
                order.append(succ[v][order[-1]])
        rot[v] = order
    return rot


def _code_from(rot, u, v, reflect):
    label = {u: 0}
    queue = [u]
    first = {u: v}
    code = []
    i = 0
    while i < len(queue):
        x = queue[i]
        i += 1
        r = rot[x][::-1] if reflect else rot[x]
        j = r.index(first[x])
        for y in r[j:] + r[:j]:
            if y not in label:
                label[y] = len(label)
                first[y] = x
                queue.append(y)
            code.append(label[y])
        code.append(-1)
    return tuple(code)


def canonical_code(rot, n) -> tuple:
    """Least rooted code over boundary arcs, both orientations."""
    if n < 2:
        return _code_from(rot, 0, rot[0][0], False) if rot[0] else (-1,)
    codes = []
    for i in range(n):
        j = (i + 1) % n
        codes.append(_code_from(rot, i, j, False))
        codes.append(_code_from(rot, j, i, True))
    return min(codes)


class _Search:
    def __init__(self, n, k_max, delta):
        self.n = n
        self.k_max = k_max
        self.delta = delta
        self.deg = [2] * n + [0] * (k_max - n)
        self.occ = [1] * n + [0] * (k_max - n)
        self.edges = {frozenset((i, (i + 1) % n)) for i in range(n)}
        self.k = n
        self.triangles = []
        self.polys = [tuple(range(n))]
        self.slack = max(0, 6 - delta)

    def _feasible(self):
        n, k = self.n, self.k
        total = sum(self.deg[:n])
        for v in range(n, k):
            total += max(self.deg[v], self.delta)
        return total <= 6 * k - 6 - 2 * n + self.slack * (self.k_max - k)

    def run(self):
        if not self.polys:
            yield self.k, list(self.triangles)
            return
        if not self._feasible():
            return
        poly = self.polys.pop()
        a, b = poly[0], poly[1]
        rest = poly[2:]
        # apex on the polygon
        for i, c in enumerate(rest):
            left = (b,) + rest[: i + 1]
            right = rest[i:] + (a,)
            new = []
            if len(left) > 2:
                e = frozenset((b, c))
                if e in self.edges:
                    continue
                new.append(e)
            if len(right) > 2:
                e = frozenset((a, c))
                if e in self.edges:
                    continue
                new.append(e)
            yield from self._place((a, b, c), new, [left, right], poly)
        # fresh internal apex
        if self.k < self.k_max:
            w = self.k
            self.k += 1
            yield from self._place((a, b, w), [frozenset((a, w)), frozenset((b, w))], [(a, w, b) + rest], poly)
            self.k -= 1
        self.polys.append(poly)

    def _place(self, tri, new_edges, pieces, poly):
        open_pieces = [p for p in pieces if len(p) > 2]
        touched = set(poly)
        touched.add(tri[2])
        for e in new_edges:
            self.edges.add(e)
            for v in e:
                self.deg[v] += 1
        for v in poly:
            self.occ[v] -= 1
        for p in open_pieces:
            for v in p:
                self.occ[v] += 1
        ok = all(not (v >= self.n and self.occ[v] == 0 and self.deg[v] < self.delta) for v in touched)
        if ok:
            self.triangles.append(tri)
            base = len(self.polys)
            self.polys.extend(open_pieces)
            yield from self.run()
            del self.polys[base:]
            self.triangles.pop()
        for p in open_pieces:
            for v in p:
                self.occ[v] -= 1
        for v in poly:
            self.occ[v] += 1
        for e in new_edges:
            self.edges.discard(e)
            for v in e:
                self.deg[v] -= 1


def enumerate_disc_triangulations(n_boundary_max: int, k_max: int, min_internal_degree: int = 6,
                                  n_boundary_min: int = 3):
    """Yield every disc triangulation up to isomorphism, once each.

    Boundary length ``n_boundary_min..n_boundary_max``, at most ``k_max`` vertices,
    internal degrees at least ``min_internal_degree``.  Chords between boundary
    vertices are allowed; parallel edges are not.
    """
    if n_boundary_max > N_BOUNDARY_LIMIT or k_max > K_LIMIT:
        raise BudgetExceeded(f"disc enumeration capped at n <= {N_BOUNDARY_LIMIT}, k <= {K_LIMIT}")
    for n in range(max(3, n_boundary_min), n_boundary_max + 1):
        if n > k_max:
            break
        seen = set()
        for k, tris in _Search(n, k_max, min_internal_degree).run():
            rot = _rotation(n, k, tris)
            code = canonical_code(rot, n)
            if code in seen:
                continue
            seen.add(code)
            yield DiscTriangulation(n, k, tuple(tris), rot, code)
