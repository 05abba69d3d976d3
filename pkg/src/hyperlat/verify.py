"""Theorem-backed verification suites shared by the command line and the tests.

Each suite returns a plain dict with a ``violations`` list; an empty list means
every check held.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .interfaces import census_violations, enumerate_pairs, peierls_sums, sharper_volume_bound
from .isoperimetry import layer_inequalities, threshold_bounds, volume_bound
from .oracle.disc import enumerate_disc_triangulations
from .oracle.exhaustive import exhaustive_percolation
from .percolation import connection_probability
from .tessellation import build_ball

PEIERLS_Q = Fraction(2, 3)


def peierls_q(regime: str, d: int):
    """q = a/(1+a) for the regime's pair ratio a; exactly 2/3 on degree-6 triangulations."""
    if regime == "deg6":
        return PEIERLS_Q
    g = 4 if regime == "quad" else 3
    a = threshold_bounds(d, g).pair_ratio
    return a / (1 + a)


def _max_k(census) -> dict[int, int]:
    out: dict[int, int] = {}
    for (m, n, bo, k) in census.pairs:
        out[n] = max(out.get(n, 0), k)
    return dict(sorted(out.items()))


def verify_disc(n: int = 9, k: int = 14, degree: int = 6) -> dict:
    """Layer and volume lemmas over every disc triangulation in range.

    With internal degree >= 7 the cut-layer inequalities are checked as well,
    taking the boundary cycle as X (instances with connected interior only).
    """
    violations = []
    counts: dict[int, int] = {}
    extremal: dict[int, int] = {}
    layer_checked = 0
    for t in enumerate_disc_triangulations(n, k, degree):
        counts[t.n] = counts.get(t.n, 0) + 1
        extremal[t.n] = max(extremal.get(t.n, 0), t.k)
        if degree >= 6:
            if t.k > t.n and t.hull_length > t.n - 6:
                violations.append({"check": "hull length <= n - 6", "n": t.n, "k": t.k, "m": t.hull_length})
            if t.k > volume_bound(t.n):
                violations.append({"check": "k <= volume bound", "n": t.n, "k": t.k})
        if degree >= 7 and t.internal_connected():
            layer_checked += 1
            X, Y, Z = t.cut_sizes()
            for ineq in layer_inequalities(X, Y, Z, degree, 3):
                if not ineq.holds:
                    violations.append({"check": ineq.name, "n": t.n, "k": t.k, "X": X, "Y": Y, "Z": Z})
    wheel = degree == 6 and n >= 6 and k >= 7
    if wheel and extremal.get(6) != 7:
        violations.append({"check": "hexagonal wheel is the n = 6 extremal", "found": extremal.get(6)})
    return {"suite": "disc", "params": {"n": n, "k": k, "degree": degree},
            "counts": {str(a): b for a, b in sorted(counts.items())},
            "extremal": {str(a): b for a, b in sorted(extremal.items())},
            "layer_checked": layer_checked, "violations": violations}


def verify_pairs(d: int = 6, g: int = 3, cap: int = 6, regime: str | None = None, radius: int | None = None,
                 census=None) -> dict:
    """Regime inequalities, volume, unzip length, round trips and the Peierls sum over one census."""
    if regime is None:
        regime = "quad" if g == 4 else ("deg6" if d == 6 else "hyper")
    if census is None:
        ball = build_ball(d, g, cap + 2 if radius is None else radius)
        census = enumerate_pairs(ball, cap)
    violations = census_violations(census, regime, d)
    q = peierls_q(regime, d)
    peierls = {}
    for n_b, s in peierls_sums(census, q).items():
        peierls[n_b] = s
        if s > volume_bound(n_b):
            violations.append({"check": "peierls sum <= volume bound", "n": n_b, "sum": str(s)})
    # the sharper bound |K| <= f(|B_o|) - |B| is reported, not asserted
    sharper_excess = [{"m": m, "n": n_b, "bo": bo, "k": k, "count": c}
                      for (m, n_b, bo, k), c in sorted(census.pairs.items()) if k > sharper_volume_bound(n_b, bo)]
    out = census.to_dict(violations)
    out.update(suite="pairs", regime=regime, d=d, g=g, round_trip_failures=census.roundtrip_failures,
               peierls_q=float(q), peierls={str(k): float(v) for k, v in peierls.items()},
               max_k={str(n_b): k for n_b, k in _max_k(census).items()},
               sharper_volume_exceeded=sharper_excess)
    return out


def verify_perc_oracle(d: int = 4, g: int = 4, radius: int = 2, trials: int = 100_000,
                       ps=(0.2, 0.5, 0.8), seed: int = 1, sigmas: float = 4.0) -> dict:
    """Monte Carlo connection frequency against the exact configuration sum."""
    ball = build_ball(d, g, radius)
    rows = []
    violations = []
    for p in ps:
        row = connection_probability(ball, p, trials, seed, [radius]).rows[0]
        exact = exhaustive_percolation(ball, p)
        sigma = math.sqrt(float(exact) * (1 - float(exact)) / trials)
        dev = abs(row.estimate - float(exact))
        entry = {"p": p, "estimate": row.estimate, "exact": float(exact), "exact_fraction": str(exact),
                 "sigma": sigma, "deviation_sigmas": dev / sigma if sigma else 0.0}
        rows.append(entry)
        if dev > sigmas * sigma:
            violations.append(dict(entry, check=f"|estimate - exact| <= {sigmas} sigma"))
    return {"suite": "perc-oracle", "params": {"d": d, "g": g, "radius": radius, "trials": trials,
                                               "seed": seed, "vertices": ball.n_vertices},
            "rows": rows, "violations": violations}
