"""Bernoulli site percolation on lattice balls.

Vertex ``v`` in trial ``t`` is occupied iff ``U(seed, t, v) < p`` with the
counter-based uniform from :mod:`hyperlat.rng`.  Using the same uniforms for
every ``p`` couples all intensities, so estimates are monotone in ``p`` sample
by sample.

The connection kernel is a union-find over occupied vertices, fed layer by
layer.  Once layer ``n`` is complete, the root's set touches layer ``n`` iff the
root is joined to layer ``n`` at all, so each trial records the deepest layer
its root cluster reaches and stops as soon as the cluster dies out.
"""

from __future__ import annotations

import csv
import io
import math
import os
from collections import Counter
from dataclasses import dataclass, field

import numba
import numpy as np
from numba import njit, prange

from .errors import BudgetExceeded
from .interfaces import host_of, interface_of, regime_inequalities
from .rng import trial_key_nb, uniform_nb, uniforms

SCHEMA_VERSION = 1
CSV_COLUMNS = ["p", "radius", "trials", "hits", "estimate", "std_err"]
DEFAULT_WORK_BUDGET = 10**12

# TBB builds older than numba's minimum only produce a warning; try OpenMP first
if "NUMBA_THREADING_LAYER_PRIORITY" not in os.environ and "NUMBA_THREADING_LAYER" not in os.environ:
    numba.config.THREADING_LAYER_PRIORITY = ["omp", "workqueue", "tbb"]


@dataclass(eq=False)
class PercolationInstance:
    patch: object = field(repr=False)
    p: float
    seed: int
    trial: int
    occupancy: np.ndarray = field(repr=False)

    @property
    def n_occupied(self) -> int:
        return int(self.occupancy.sum())


def sample_instance(patch, p: float, seed: int, trial: int = 0) -> PercolationInstance:
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    host = host_of(patch)
    occ = uniforms(seed, trial, np.arange(host.n_vertices)) < p
    return PercolationInstance(patch, p, seed, trial, occ)


# -- compiled kernels ------------------------------------------------------------------


@njit(cache=True, inline="always")
def _find(parent, x):
    root = x
    while parent[root] != root:
        root = parent[root]
    while parent[x] != root:
        nxt = parent[x]
        parent[x] = root
        x = nxt
    return root


@njit(cache=True)
def _deepest_layer(adj_off, adj, layer, layer_end, root, p, key, V):
    """Deepest layer joined to the root by occupied vertices (-1 if the root is vacant).

    Vertices are numbered layer by layer; ``layer_end[n]`` is one past the last
    vertex of layer n.
    """
    if not uniform_nb(key, root) < p:
        return -1
    parent = np.empty(V, np.int32)
    size = np.empty(V, np.int32)
    deep = np.empty(V, np.int32)
    occ = np.zeros(V, np.bool_)
    n_layers = layer_end.shape[0]
    best = 0
    start = 0
    for n in range(n_layers):
        stop = layer_end[n]
        for v in range(start, stop):
            if not uniform_nb(key, v) < p:
                continue
            occ[v] = True
            parent[v] = v
            size[v] = 1
            deep[v] = n
            for e in range(adj_off[v], adj_off[v + 1]):
                u = adj[e]
                if u < v and occ[u]:
                    a = _find(parent, u)
                    b = _find(parent, v)
                    if a != b:
                        if size[a] < size[b]:
                            a, b = b, a
                        parent[b] = a
                        size[a] += size[b]
                        if deep[b] > deep[a]:
                            deep[a] = deep[b]
        start = stop
        r = _find(parent, root)
        if deep[r] < n:
            break
        best = n
    return best


@njit(cache=True, parallel=True)
def _deepest_layers(adj_off, adj, layer, layer_end, root, p, seed, trial0, ntrials):
    out = np.empty(ntrials, np.int64)
    V = layer.shape[0]
    for t in prange(ntrials):
        key = trial_key_nb(seed, np.uint64(trial0 + t))
        out[t] = _deepest_layer(adj_off, adj, layer, layer_end, root, p, key, V)
    return out


@njit(cache=True)
def _root_cluster(adj_off, adj, layer, root, p, key, max_layer, out):
    """Occupied cluster of the root written to ``out``; returns its size, -1 past ``max_layer``."""
    V = layer.shape[0]
    if not uniform_nb(key, root) < p:
        return 0
    state = np.zeros(V, np.int8)  # 0 unseen, 1 occupied and queued, 2 vacant
    state[root] = 1
    out[0] = root
    n = 1
    head = 0
    while head < n:
        v = out[head]
        head += 1
        if layer[v] > max_layer:
            return -1
        for e in range(adj_off[v], adj_off[v + 1]):
            u = adj[e]
            if state[u] == 0:
                if uniform_nb(key, u) < p:
                    state[u] = 1
                    out[n] = u
                    n += 1
                else:
                    state[u] = 2
    return n


# -- estimators --------------------------------------------------------------------------


def _layer_layout(host):
    layers = host.layers
    order_ok = bool(np.all(np.diff(layers) >= 0))
    if not order_ok:
        raise ValueError("percolation kernels need vertices numbered layer by layer")
    ends = np.searchsorted(layers, np.arange(host.rim_layer + 1), side="right").astype(np.int64)
    return layers.astype(np.int64), ends


def set_threads(threads: int | None) -> None:
    if threads:
        numba.set_num_threads(max(1, min(int(threads), numba.config.NUMBA_NUM_THREADS)))


def deepest_layers(ball, p: float, trials: int, seed: int, trial0: int = 0) -> np.ndarray:
    """Per trial, the deepest layer reached by the root's occupied cluster (-1: root vacant)."""
    host = host_of(ball)
    budget = int(os.environ.get("HYPERLAT_WORK_BUDGET", DEFAULT_WORK_BUDGET))
    if trials * host.n_vertices > budget:
        raise BudgetExceeded(f"{trials} trials on {host.n_vertices} vertices exceed the work budget")
    layers, ends = _layer_layout(host)
    return _deepest_layers(host.offsets, host.targets, layers, ends, host.root, float(p),
                           np.uint64(seed), trial0, int(trials))


@dataclass(frozen=True)
class SweepRow:
    p: float
    radius: int
    trials: int
    hits: int

    @property
    def estimate(self) -> float:
        return self.hits / self.trials

    @property
    def std_err(self) -> float:
        e = self.estimate
        return math.sqrt(e * (1 - e) / self.trials)

    def as_dict(self) -> dict:
        return {"p": self.p, "radius": self.radius, "trials": self.trials, "hits": self.hits,
                "estimate": self.estimate, "std_err": self.std_err}


@dataclass
class SweepResult:
    rows: list[SweepRow]
    meta: dict = field(default_factory=dict)

    def row(self, p: float, radius: int) -> SweepRow:
        for r in self.rows:
            if r.p == p and r.radius == radius:
                return r
        raise KeyError((p, radius))

    def merged(self, other: "SweepResult") -> "SweepResult":
        """Pool trials of two runs (hits and trials add; order does not matter)."""
        acc: dict[tuple[float, int], list[int]] = {}
        for r in self.rows + other.rows:
            a = acc.setdefault((r.p, r.radius), [0, 0])
            a[0] += r.trials
            a[1] += r.hits
        rows = [SweepRow(p, rad, t, h) for (p, rad), (t, h) in sorted(acc.items())]
        return SweepResult(rows, dict(self.meta))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in self.rows:
            w.writerow([repr(r.p), r.radius, r.trials, r.hits, repr(r.estimate), repr(r.std_err)])
        return buf.getvalue()


def _checkpoints(host, radius_checkpoints):
    if radius_checkpoints is None:
        return list(range(2, host.rim_layer + 1, 2))
    cps = sorted(set(int(r) for r in radius_checkpoints))
    if cps and (cps[0] < 0 or cps[-1] > host.rim_layer):
        raise ValueError("checkpoint outside the patch")
    return cps


def connection_probability(ball, p: float, trials: int, seed: int, radius_checkpoints=None,
                           trial0: int = 0) -> SweepResult:
    """Frequency that the root's occupied cluster meets layer rho, per checkpoint rho."""
    if trials < 1:
        raise ValueError("need at least one trial")
    host = host_of(ball)
    cps = _checkpoints(host, radius_checkpoints)
    deep = deepest_layers(ball, p, trials, seed, trial0)
    rows = [SweepRow(float(p), rho, int(trials), int(np.count_nonzero(deep >= rho))) for rho in cps]
    return SweepResult(rows, _meta(ball, seed))


def _meta(ball, seed) -> dict:
    meta = {"schema_version": SCHEMA_VERSION, "seed": int(seed)}
    for key in ("d", "g", "r"):
        if hasattr(ball, key):
            meta[key] = int(getattr(ball, key))
    return meta


def sweep(ball, p_grid, trials: int, seed: int, radius_checkpoints=None) -> SweepResult:
    grid = [float(p) for p in p_grid]
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("p grid must be strictly increasing")
    if any(not 0.0 < p < 1.0 for p in grid):
        raise ValueError("p grid must lie in (0, 1)")
    rows = []
    for p in grid:
        rows.extend(connection_probability(ball, p, trials, seed, radius_checkpoints).rows)
    return SweepResult(rows, _meta(ball, seed))


# -- interface statistics under percolation ---------------------------------------------------


@dataclass
class InterfaceStats:
    rows: Counter
    trials: int
    vacant: int
    censored: int
    regime: str | None
    d: int | None
    violations: list[dict]

    @property
    def recorded(self) -> int:
        return sum(self.rows.values())

    @property
    def censored_fraction(self) -> float:
        return self.censored / self.trials

    @property
    def max_ratio(self) -> float:
        """Largest |M|/|B| seen."""
        return max((m / n for (_, m, n, _) in self.rows), default=0.0)

    def histogram(self) -> Counter:
        """(|C|, |M|, |B|) -> count."""
        out: Counter = Counter()
        for (s, m, n, bo), c in self.rows.items():
            out[(s, m, n)] += c
        return out


def cluster_interface_stats(ball, p: float, trials: int, seed: int, regime: str | None = None,
                            d: int | None = None, trial0: int = 0) -> InterfaceStats:
    """Interfaces of finite root clusters; clusters reaching the last two layers are censored."""
    host = host_of(ball)
    layers = host.layers.astype(np.int64)
    max_layer = host.rim_layer - 2
    buf = np.empty(host.n_vertices, np.int64)
    rows: Counter = Counter()
    vacant = censored = 0
    cache: dict[frozenset[int], tuple[int, int, int]] = {}
    for t in range(trial0, trial0 + trials):
        key = np.uint64(trial_key_nb(np.uint64(seed), np.uint64(t)))
        size = _root_cluster(host.offsets, host.targets, layers, host.root, float(p), key, max_layer, buf)
        if size == 0:
            vacant += 1
            continue
        if size < 0:
            censored += 1
            continue
        C = frozenset(buf[:size].tolist())
        if C not in cache:
            pair = interface_of(C, host, check=False)
            cache[C] = (pair.m, pair.n, len(pair.B_o))
        m, n, bo = cache[C]
        rows[(size, m, n, bo)] += 1
    violations = []
    if regime is not None:
        for (s, m, n, bo), c in sorted(rows.items()):
            for ineq in regime_inequalities(m, n, bo, regime, d):
                if not ineq.holds:
                    violations.append({"check": ineq.name, "size": s, "m": m, "n": n, "bo": bo, "count": c})
    return InterfaceStats(rows, trials, vacant, censored, regime, d, violations)
