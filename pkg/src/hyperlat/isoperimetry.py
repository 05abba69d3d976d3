"""Vertex boundaries, Cheeger ratios, minimal vertex cuts and threshold bounds.

Everything that compares against ``alpha(d)`` does so exactly: quantities of the
form ``a + b*alpha`` with rational ``a, b`` are held as :class:`AlphaLinear` and
their sign is decided with integer arithmetic on the surd
``alpha = (d - 6 + sqrt((d - 2)(d - 6))) / 2``.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import numpy as np
from scipy import sparse
from scipy.sparse.csgraph import breadth_first_order, maximum_flow

from .errors import DomainError, RegimeMismatch, TooCloseToRim
from .planar_map import PlanarMap


def alpha(d: int) -> float:
    """Vertex Cheeger constant of the d-regular triangulation (d >= 7)."""
    if d < 7:
        raise DomainError(f"alpha is defined for d >= 7, got {d}")
    return (d - 6 + math.sqrt((d - 2) * (d - 6))) / 2


def alpha_identity_residual(d: int) -> float:
    """|alpha - (d - 6) - alpha / (1 + alpha)|, zero up to rounding."""
    a = alpha(d)
    return abs(a - (d - 6) - a / (1 + a))


def volume_bound(n: int) -> int:
    """floor(n^2/12 + n/2 + 1), computed in integers."""
    return (n * n + 6 * n + 12) // 12


@dataclass(frozen=True)
class AlphaLinear:
    """Exact number ``a + b * alpha(d)`` with rational ``a`` and ``b``."""

    a: Fraction
    b: Fraction
    d: int

    @classmethod
    def of(cls, a, b, d: int) -> "AlphaLinear":
        return cls(Fraction(a), Fraction(b), d)

    def _coerce(self, other) -> "AlphaLinear":
        if isinstance(other, AlphaLinear):
            if other.d != self.d:
                raise ValueError("mixing different alpha constants")
            return other
        return AlphaLinear(Fraction(other), Fraction(0), self.d)

    def __add__(self, other):
        o = self._coerce(other)
        return AlphaLinear(self.a + o.a, self.b + o.b, self.d)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return AlphaLinear(self.a - o.a, self.b - o.b, self.d)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, k):
        if isinstance(k, AlphaLinear):
            raise TypeError("product of two surds is not linear in alpha")
        k = Fraction(k)
        return AlphaLinear(self.a * k, self.b * k, self.d)

    __rmul__ = __mul__

    def __neg__(self):
        return AlphaLinear(-self.a, -self.b, self.d)

    def sign(self) -> int:
        # a + b*alpha = ((2a + b*k) + b*sqrt(D)) / 2
        k = self.d - 6
        D = (self.d - 2) * (self.d - 6)
        p = 2 * self.a + self.b * k
        q = self.b
        return _surd_sign(p, q, D)

    def __float__(self) -> float:
        return float(self.a) + float(self.b) * alpha(self.d)


def _sgn(x) -> int:
    return (x > 0) - (x < 0)


def _surd_sign(p: Fraction, q: Fraction, D: int) -> int:
    """Sign of p + q*sqrt(D) for D >= 0."""
    sp, sq = _sgn(p), _sgn(q)
    if sq == 0 or D == 0:
        return sp
    if sp == 0:
        return sq
    if sp == sq:
        return sp
    # opposite signs: compare p^2 with q^2 D
    return sp * _sgn(p * p - q * q * D)


def as_number(x, d: int | None = None):
    """Promote ints/Fractions to AlphaLinear when a surd constant is in play."""
    if isinstance(x, AlphaLinear) or d is None:
        return x
    return AlphaLinear.of(x, 0, d)


@dataclass(frozen=True)
class Inequality:
    """``lhs <= rhs`` (or ``<`` when strict), evaluated exactly."""

    name: str
    lhs: object
    rhs: object
    strict: bool = False

    @property
    def slack(self):
        return self.rhs - self.lhs

    @property
    def holds(self) -> bool:
        s = self.slack
        sign = s.sign() if isinstance(s, AlphaLinear) else _sgn(s)
        return sign > 0 if self.strict else sign >= 0

    def as_dict(self) -> dict:
        return {"name": self.name, "lhs": float(self.lhs), "rhs": float(self.rhs),
                "slack": float(self.slack), "strict": self.strict, "holds": self.holds}


# -- threshold constants -------------------------------------------------------


def bs_bound(h) -> float:
    """Generic upper bound 1/(1+h) from a vertex Cheeger constant h."""
    return 1.0 / (1.0 + float(h))


def pc_nonamenable(beta) -> Fraction | float:
    """(2 + beta) / (3 + 3 beta): minimum degree 6 plus Cheeger constant beta."""
    if isinstance(beta, (int, Fraction)):
        return Fraction(2 + beta, 3 + 3 * Fraction(beta))
    return (2 + beta) / (3 + 3 * beta)


def nonamenable_pair_ratio(beta):
    """Interface-to-boundary ratio (2 + beta)/(1 + 2 beta) behind the bound above."""
    if isinstance(beta, (int, Fraction)):
        return Fraction(2 + beta, 1 + 2 * Fraction(beta))
    return (2 + beta) / (1 + 2 * beta)


def pc_hyper(d: int) -> float:
    a = alpha(d)
    return (2 + a) / ((d - 3) * (1 + a))


def pc_quad(d: int) -> float:
    a = alpha(d + 2)
    return (2 + a) * (d - 2) / ((d * d - 3 * d + 1) * (1 + a))


def quad_layer_coefficient(d: int) -> Fraction:
    """d - 4 + (d - 3)/(d - 2)."""
    return d - 4 + Fraction(d - 3, d - 2)


@dataclass(frozen=True)
class ThresholdConstants:
    d: int
    g: int
    alpha: float | None
    pair_ratio: float
    pc_deg6: Fraction | None = None
    pc_hyper: float | None = None
    pc_quad: float | None = None
    bs_bound: float | None = None
    beta: float | None = None
    pc_nonamenable: float | Fraction | None = None

    @property
    def best(self) -> float:
        vals = [v for v in (self.pc_deg6, self.pc_hyper, self.pc_quad, self.bs_bound, self.pc_nonamenable)
                if v is not None]
        return float(min(vals))

    def to_dict(self) -> dict:
        def num(x):
            return None if x is None else float(x)
        out = {
            "d": self.d, "g": self.g, "alpha": self.alpha, "pair_ratio": num(self.pair_ratio),
            "pc_deg6": num(self.pc_deg6), "pc_hyper": self.pc_hyper, "pc_quad": self.pc_quad,
            "bs_bound": self.bs_bound, "beta": num(self.beta), "pc_nonamenable": num(self.pc_nonamenable),
            "best": self.best,
        }
        if self.pc_deg6 is not None:
            out["pc_deg6_exact"] = str(self.pc_deg6)
        return out


def threshold_bounds(d: int, g: int, beta=None) -> ThresholdConstants:
    """All percolation-threshold bounds applicable to minimum degree d, face degree g."""
    if beta is not None and beta < 0:
        raise DomainError("beta must be non-negative")
    kw = {}
    if beta is not None:
        kw.update(beta=beta, pc_nonamenable=pc_nonamenable(beta))
    if g == 3 and d >= 6:
        if d == 6:
            ratio = 2 if beta is None else nonamenable_pair_ratio(beta)
            return ThresholdConstants(d, g, None, ratio, pc_deg6=Fraction(2, 3), **kw)
        a = alpha(d)
        ratio = (2 + a) / (d - 5 + (d - 4) * a)
        return ThresholdConstants(d, g, a, ratio, pc_deg6=Fraction(2, 3), pc_hyper=pc_hyper(d),
                                  bs_bound=bs_bound(a), **kw)
    if g == 4 and d >= 5:
        a = alpha(d + 2)
        c = float(quad_layer_coefficient(d))
        ratio = (2 + a) / (a + (1 + a) * c)
        return ThresholdConstants(d, g, a, ratio, pc_quad=pc_quad(d), bs_bound=bs_bound(a), **kw)
    raise DomainError(f"no bound for degree {d} and face degree {g}")


# -- boundaries and Cheeger ratios ----------------------------------------------


def _host(patch) -> PlanarMap:
    return patch if isinstance(patch, PlanarMap) else patch.map


def vertex_boundary(patch, S: Iterable[int], check_rim: bool = True) -> frozenset[int]:
    """Vertices outside ``S`` adjacent to ``S``."""
    host = _host(patch)
    S = set(S)
    adj = host.adjacency
    out = {u for v in S for u in adj[v] if u not in S}
    if check_rim:
        rim = host.rim_layer
        layers = host.layers
        if any(layers[v] >= rim for v in S) or any(layers[u] >= rim for u in out):
            raise TooCloseToRim("set or its boundary reaches the outermost layer")
    return frozenset(out)


def boundary_ratio_check(patch, S, d_alpha: int) -> Inequality:
    """|dS| >= alpha(d_alpha) |S|, exactly."""
    bd = vertex_boundary(patch, S)
    return Inequality("boundary >= alpha * size", AlphaLinear.of(0, len(set(S)), d_alpha),
                      AlphaLinear.of(len(bd), 0, d_alpha))


@dataclass(frozen=True)
class CheegerRow:
    n: int
    ball: int
    boundary: int

    @property
    def ratio(self) -> float:
        return self.boundary / self.ball


@dataclass
class CheegerReport:
    rows: list[CheegerRow]
    target: float

    def table(self) -> list[dict]:
        return [{"n": r.n, "ball": r.ball, "boundary": r.boundary, "ratio": r.ratio,
                 "target": self.target, "abs_err": abs(r.ratio - self.target)} for r in self.rows]


def cheeger_target(d: int, g: int) -> float:
    if g == 3:
        return 0.0 if d == 6 else alpha(d)
    if g == 4:
        return 0.0 if d == 4 else alpha(d + 2)
    raise DomainError("face degree must be 3 or 4")


def cheeger_sequence(ball) -> CheegerReport:
    """|dB_n| / |B_n| for n = 0..r-1, using dB_n = B_{n+1} minus B_n."""
    sizes = ball.layer_sizes
    rows = [CheegerRow(n, sizes[n], sizes[n + 1] - sizes[n]) for n in range(ball.r)]
    return CheegerReport(rows, cheeger_target(ball.d, ball.g))


# -- minimal vertex cuts -----------------------------------------------------------


@dataclass(frozen=True)
class CutDecomposition:
    X: frozenset[int]
    Y: frozenset[int]
    Z: frozenset[int]
    source: frozenset[int]

    @property
    def finite_side(self) -> frozenset[int]:
        return self.Y | self.Z


def _reaches(adj, sources, targets, blocked) -> bool:
    seen = set(sources) - blocked
    queue = deque(seen)
    while queue:
        v = queue.popleft()
        if v in targets:
            return True
        for u in adj[v]:
            if u not in seen and u not in blocked:
                seen.add(u)
                queue.append(u)
    return False


def _component(adj, start, blocked) -> set[int]:
    seen = {start}
    queue = deque([start])
    while queue:
        v = queue.popleft()
        for u in adj[v]:
            if u not in seen and u not in blocked:
                seen.add(u)
                queue.append(u)
    return seen


def min_vertex_cut(patch, source: int | Iterable[int] | None = None, sink: Iterable[int] | None = None,
                   certify: bool = True) -> CutDecomposition:
    """Minimum vertex cut between ``source`` (default root) and ``sink`` (default rim).

    Vertices are split into in/out copies joined by unit capacity.  Among all
    minimum cuts the one closest to the source is returned (the residual
    reachability cut).
    """
    host = _host(patch)
    n = host.n_vertices
    if source is None:
        src = {host.root}
    elif isinstance(source, (int, np.integer)):
        src = {int(source)}
    else:
        src = set(source)
    snk = set(host.rim if sink is None else sink)
    if src & snk:
        raise TooCloseToRim("source meets the sink")
    big = n + 1
    s_node, t_node = 2 * n, 2 * n + 1
    rows, cols, caps = [], [], []
    v = np.arange(n)
    inner = np.where(np.isin(v, list(src)), big, 1)
    rows.append(2 * v); cols.append(2 * v + 1); caps.append(inner)
    rows.append(2 * host.sources + 1); cols.append(2 * host.targets); caps.append(np.full(len(host.targets), big))
    sl = np.asarray(sorted(src)); tl = np.asarray(sorted(snk))
    rows.append(np.full(len(sl), s_node)); cols.append(2 * sl); caps.append(np.full(len(sl), big))
    rows.append(2 * tl + 1); cols.append(np.full(len(tl), t_node)); caps.append(np.full(len(tl), big))
    r = np.concatenate(rows); c = np.concatenate(cols); k = np.concatenate(caps).astype(np.int32)
    cap = sparse.csr_matrix((k, (r, c)), shape=(2 * n + 2, 2 * n + 2))
    res = maximum_flow(cap, s_node, t_node)
    residual = (cap - res.flow).tocsr()
    residual.data = np.where(residual.data > 0, 1, 0).astype(np.int8)
    residual.eliminate_zeros()
    order = breadth_first_order(residual, s_node, directed=True, return_predecessors=False)
    reach = np.zeros(2 * n + 2, dtype=bool)
    reach[order] = True
    X = frozenset(np.flatnonzero(reach[0:2 * n:2] & ~reach[1:2 * n:2]).tolist())
    assert len(X) == res.flow_value
    adj = host.adjacency
    finite: set[int] = set()
    for s in src:
        finite |= _component(adj, s, X)
    Y = frozenset(v for v in finite if any(u in X for u in adj[v]))
    Z = frozenset(finite - Y)
    if certify:
        if _reaches(adj, src, snk, set(X)):
            raise AssertionError("cut does not separate")
        for x in X:
            if not _reaches(adj, src, snk, set(X) - {x}):
                raise AssertionError(f"cut is not minimal at {x}")
    return CutDecomposition(X, Y, Z, frozenset(src))


def layer_inequalities(nx: int, ny: int, nz: int, d: int, g: int) -> list[Inequality]:
    """Exact layer and isoperimetric inequalities for cut sizes |X|, |Y|, |Z|."""
    if g == 3:
        if d < 6:
            raise RegimeMismatch("triangulation regime needs minimum degree >= 6")
        out = [Inequality("X >= (d-5)Y + (d-6)Z + 5", (d - 5) * ny + (d - 6) * nz + 5, nx)]
        if d >= 7:
            out.append(Inequality("alpha_d |Y u Z| < X - 5", AlphaLinear.of(0, ny + nz, d),
                                  AlphaLinear.of(nx - 5, 0, d), strict=True))
        return out
    if g == 4:
        if d < 5:
            raise RegimeMismatch("quadrangulation regime needs minimum degree >= 5")
        out = [Inequality("X >= (d-3)Y + (d-4)Z + 3", (d - 3) * ny + (d - 4) * nz + 3, nx)]
        if ny > 1:
            out.append(Inequality("X >= (d-3)Y + (d-4)Z + 4", (d - 3) * ny + (d - 4) * nz + 4, nx))
        out.append(Inequality("alpha_{d+2} |Y u Z| < X - 3", AlphaLinear.of(0, ny + nz, d + 2),
                              AlphaLinear.of(nx - 3, 0, d + 2), strict=True))
        return out
    raise RegimeMismatch("face degree must be 3 or 4")


def layer_inequality_check(decomp: CutDecomposition, d: int, g: int) -> list[Inequality]:
    return layer_inequalities(len(decomp.X), len(decomp.Y), len(decomp.Z), d, g)


def random_connected_set(patch, size: int, seed: int, max_layer: int | None = None) -> frozenset[int]:
    """Connected set containing the root grown by random frontier additions."""
    host = _host(patch)
    rng = np.random.default_rng(seed)
    layers = host.layers
    cap = host.rim_layer - 2 if max_layer is None else max_layer
    S = {host.root}
    frontier = [u for u in host.adjacency[host.root] if layers[u] <= cap]
    while len(S) < size and frontier:
        u = frontier.pop(int(rng.integers(len(frontier))))
        if u in S:
            continue
        S.add(u)
        frontier.extend(w for w in host.adjacency[u] if w not in S and layers[w] <= cap)
    return frozenset(S)
