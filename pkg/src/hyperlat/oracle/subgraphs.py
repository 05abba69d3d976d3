"""Brute-force enumeration of connected vertex sets containing a root."""

from __future__ import annotations

from typing import Iterator

from ..errors import BudgetExceeded


def _adjacency(patch):
    host = patch if hasattr(patch, "adjacency") else patch.map
    return host.adjacency


def enumerate_connected_subgraphs(patch, o: int, size_max: int, max_sets: int = 5_000_000) -> Iterator[frozenset[int]]:
    """Every connected vertex set containing ``o`` with at most ``size_max`` vertices.

    Grows sets one size at a time and deduplicates with a hash set, so each set
    is emitted exactly once, in order of increasing size.
    """
    adj = _adjacency(patch)
    level = {frozenset([o])}
    emitted = 0
    for size in range(1, size_max + 1):
        for S in sorted(level, key=sorted):
            emitted += 1
            if emitted > max_sets:
                raise BudgetExceeded(f"more than {max_sets} connected sets")
            yield S
        if size == size_max:
            return
        nxt = set()
        for S in level:
            for v in S:
                for u in adj[v]:
                    if u not in S:
                        nxt.add(S | {u})
        level = nxt


def count_connected_subgraphs(patch, o: int, size_max: int) -> dict[int, int]:
    """Size -> count, by untried-set backtracking (no hashing)."""
    adj = _adjacency(patch)
    counts = {s: 0 for s in range(1, size_max + 1)}
    seen = {o}

    def grow(size: int, untried: list[int]) -> None:
        counts[size] += 1
        if size == size_max:
            return
        untried = list(untried)
        while untried:
            v = untried.pop()
            fresh = [u for u in adj[v] if u not in seen]
            seen.update(fresh)
            grow(size + 1, untried + fresh)
            seen.difference_update(fresh)

    first = [u for u in adj[o]]
    seen.update(first)
    grow(1, first)
    return counts
