"""Balls of the regular tessellations H_{d,3} and H_{d,4}.

Balls are grown one layer at a time.  Layer ``n`` is kept as a cyclic list in
counter-clockwise order around the root.  Walking along layer ``n``, each vertex
``v`` emits first the child it shares with its predecessor and then ``e_v``
children of its own, where ``e_v`` is whatever makes ``deg v == d``:

* triangulations: ``e_v = d - 4 - p_v`` (two layer neighbours, two shared children),
* quadrangulations: ``e_v = d - 2 - p_v`` (no edges inside a layer),

with ``p_v`` the number of parents.  Vertex ids are assigned layer by layer, so
layer ``n`` occupies the id range ``starts[n]:starts[n + 1]``.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

import numpy as np

from .errors import BudgetExceeded, DomainError, MapError
from .planar_map import SCHEMA_VERSION, PlanarMap, build_from_rotation

DEFAULT_BUDGET = 5_000_000


def vertex_budget(budget: int | None = None) -> int:
    if budget is not None:
        return int(budget)
    return int(os.environ.get("HYPERLAT_BUDGET", DEFAULT_BUDGET))


def projected_ball_sizes(d: int, g: int, r: int) -> list[int]:
    """Cumulative ball sizes |B_0|..|B_r| from the layer recurrence."""
    if g == 3:
        a, c = d - 4, 6
    elif g == 4:
        a, c = d - 2, 4
    else:
        raise DomainError("face degree must be 3 or 4")
    sizes = [1, d + 1]
    while len(sizes) <= r:
        sizes.append(a * sizes[-1] - sizes[-2] + c)
    return sizes[: r + 1]


@dataclass(eq=False)
class LatticeBall:
    map: PlanarMap
    d: int
    g: int
    r: int
    layer: np.ndarray
    starts: np.ndarray = field(repr=False)

    @property
    def n_vertices(self) -> int:
        return self.map.n_vertices

    @cached_property
    def layer_sizes(self) -> list[int]:
        """Cumulative sizes |B_0|, ..., |B_r|."""
        return self.starts[1:].tolist()

    @cached_property
    def sphere_sizes(self) -> list[int]:
        return np.diff(self.starts).tolist()

    def layer_vertices(self, n: int) -> np.ndarray:
        return np.arange(self.starts[n], self.starts[n + 1], dtype=np.int64)

    def ball_vertices(self, n: int) -> np.ndarray:
        return np.arange(0, self.starts[n + 1], dtype=np.int64)

    def to_dict(self) -> dict:
        out = self.map.to_dict()
        out.update(
            degree=self.d,
            face_degree=self.g,
            radius=self.r,
            layers=[self.layer_vertices(n).tolist() for n in range(self.r + 1)],
            layer_sizes=self.layer_sizes,
        )
        return out

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_dict()))

    @classmethod
    def from_dict(cls, data) -> "LatticeBall":
        m = PlanarMap.from_dict(data)
        index = {int(i): k for k, i in enumerate(m.ids.tolist())}
        layer = np.empty(m.n_vertices, dtype=np.int64)
        for n, ids in enumerate(data["layers"]):
            layer[[index[int(i)] for i in ids]] = n
        if not np.array_equal(layer, m.layers):
            raise MapError("stored layers disagree with distances from the root")
        counts = np.bincount(layer, minlength=int(data["radius"]) + 1)
        starts = np.zeros(len(counts) + 1, dtype=np.int64)
        np.cumsum(counts, out=starts[1:])
        return cls(m, int(data["degree"]), int(data["face_degree"]), int(data["radius"]), layer, starts)

    @classmethod
    def load(cls, path) -> "LatticeBall":
        return cls.from_dict(json.loads(Path(path).read_text()))


def build_triangulation_ball(d: int, r: int, budget: int | None = None) -> LatticeBall:
    if d < 6:
        raise DomainError("triangulation balls need d >= 6")
    return _build(d, 3, r, budget)


def build_quadrangulation_ball(d: int, r: int, budget: int | None = None) -> LatticeBall:
    if d < 4:
        raise DomainError("quadrangulation balls need d >= 4")
    return _build(d, 4, r, budget)


def build_ball(d: int, g: int, r: int, budget: int | None = None) -> LatticeBall:
    if g == 3:
        return build_triangulation_ball(d, r, budget)
    if g == 4:
        return build_quadrangulation_ball(d, r, budget)
    raise DomainError("face degree must be 3 or 4")


def _build(d: int, g: int, r: int, budget: int | None) -> LatticeBall:
    if r < 0:
        raise DomainError("radius must be non-negative")
    limit = vertex_budget(budget)
    total = projected_ball_sizes(d, g, r)[-1]
    if total > limit:
        raise BudgetExceeded(f"ball of radius {r} has {total} vertices, budget is {limit}")
    if r == 0:
        m = build_from_rotation({0: []}, 0)
        return LatticeBall(m, d, g, 0, np.zeros(1, dtype=np.int64), np.array([0, 1]))

    tri = g == 3
    nbr = np.full((total, d), -1, dtype=np.int64)
    nbr[0] = np.arange(1, d + 1)
    starts = [0, 1, d + 1]
    # parents listed next-side first: (v_i, v_{i-1}) for shared children
    par_a = np.zeros(d, dtype=np.int64)
    par_b = np.full(d, -1, dtype=np.int64)
    for n in range(1, r + 1):
        lo, hi = starts[n], starts[n + 1]
        k = hi - lo
        ids = np.arange(lo, hi)
        npar = 1 + (par_b >= 0)
        col = np.zeros(k, dtype=np.int64)
        rows = nbr[lo:hi]
        if tri:
            rows[:, 0] = np.roll(ids, -1)
            col += 1
        rows[np.arange(k), col] = par_a
        two = par_b >= 0
        rows[np.flatnonzero(two), col[two] + 1] = par_b[two]
        col += npar
        if tri:
            rows[np.arange(k), col] = np.roll(ids, 1)
            col += 1
        if n == r:
            break
        extra = (d - 4 - npar) if tri else (d - 2 - npar)
        block = 1 + extra
        bstart = np.zeros(k + 1, dtype=np.int64)
        np.cumsum(block, out=bstart[1:])
        knew = int(bstart[-1])
        new_lo = hi
        # children of v_i: block i plus the first vertex of block i + 1 (cyclically)
        nchild = block + 1
        owner = np.repeat(np.arange(k), nchild)
        offs = np.arange(int(nchild.sum())) - np.repeat(np.cumsum(nchild) - nchild, nchild)
        child = new_lo + (bstart[owner] + offs) % knew
        rows[owner, col[owner] + offs] = child
        # parents of the new layer
        par_a = np.repeat(np.arange(lo, hi), block)
        par_b = np.full(knew, -1, dtype=np.int64)
        par_b[bstart[:-1]] = np.roll(ids, 1)
        starts.append(new_lo + knew)
    starts_arr = np.asarray(starts[: r + 2], dtype=np.int64)
    assert starts_arr[-1] == total
    counts = (nbr >= 0).sum(axis=1)
    offsets = np.zeros(total + 1, dtype=np.int64)
    np.cumsum(counts, out=offsets[1:])
    targets = nbr[nbr >= 0]
    layer = np.repeat(np.arange(r + 1), np.diff(starts_arr))
    m = PlanarMap(offsets, targets, root=0, outer_arc=_outer_arc(starts_arr, r, tri, offsets, targets))
    return LatticeBall(m, d, g, r, layer, starts_arr)


def _outer_arc(starts, r, tri, offsets, targets):
    # first rim vertex v; arc (w -> v) where w is the first entry of v's rotation
    v = int(starts[r])
    w = int(targets[offsets[v]])
    return (w, v)
