"""Exact connection probabilities by summing over every occupancy configuration."""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from ..errors import BudgetExceeded

MAX_VERTICES = 22


def _host(patch):
    return patch if hasattr(patch, "adjacency") else patch.map


def connecting_counts(patch, target_layer: int | None = None) -> list[int]:
    """counts[j] = number of configurations with j occupied vertices joining the root to the target layer."""
    host = _host(patch)
    V = host.n_vertices
    if V > MAX_VERTICES:
        raise BudgetExceeded(f"{V} vertices exceed the exhaustive limit of {MAX_VERTICES}")
    layers = host.layers
    layer = host.rim_layer if target_layer is None else target_layer
    target = 0
    for v in np.flatnonzero(layers == layer).tolist():
        target |= 1 << v
    nbmask = [sum(1 << u for u in host.adjacency[v]) for v in range(V)]
    masks = np.arange(1 << V, dtype=np.uint32)
    reach = masks & np.uint32(1 << host.root)
    while True:
        grow = np.zeros_like(reach)
        for v in range(V):
            hit = ((reach >> np.uint32(v)) & np.uint32(1)).astype(bool)
            grow[hit] |= np.uint32(nbmask[v])
        new = reach | (grow & masks)
        if np.array_equal(new, reach):
            break
        reach = new
    ok = (reach & np.uint32(target)) != 0
    pop = np.zeros(1 << V, dtype=np.int64)
    for v in range(V):
        pop += (masks >> np.uint32(v)) & np.uint32(1)
    return np.bincount(pop[ok], minlength=V + 1).tolist()


def _exact(p) -> Fraction:
    if isinstance(p, float):
        return Fraction(repr(p))
    return Fraction(p)


def exhaustive_percolation(patch, p, target_layer: int | None = None) -> Fraction:
    """P(root joined to the target layer, default the rim) as an exact fraction."""
    q = _exact(p)
    if not 0 <= q <= 1:
        raise ValueError("p must lie in [0, 1]")
    counts = connecting_counts(patch, target_layer)
    V = len(counts) - 1
    return sum((c * q ** j * (1 - q) ** (V - j) for j, c in enumerate(counts) if c), Fraction(0))
