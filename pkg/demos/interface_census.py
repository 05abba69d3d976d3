"""Census of (outer interface, outer boundary) pairs around the root.

For each lattice every pair found among clusters of at most ``cap`` vertices is
checked against the interface inequalities; the largest |M| per |B| is shown
next to the linear bound it must respect.
"""

import sys
import time

from hyperlat import build_ball, enumerate_pairs
from hyperlat.interfaces import census_violations
from hyperlat.isoperimetry import threshold_bounds

LATTICES = [(6, 3, "deg6"), (7, 3, "hyper"), (5, 4, "quad")]


def main(cap: int = 7) -> None:
    for d, g, regime in LATTICES:
        t0 = time.perf_counter()
        census = enumerate_pairs(build_ball(d, g, cap + 2), cap)
        bad = census_violations(census, regime, d)
        ratio = threshold_bounds(d, g).pair_ratio if regime != "deg6" else None
        print(f"H_{{{d},{g}}} cap={cap}: {census.n_clusters} clusters, {census.n_pairs} pairs, "
              f"{len(bad)} violations ({time.perf_counter() - t0:.1f}s)")
        for n, (m, _) in sorted(census.extremal.items()):
            bound = f"{ratio * n:6.2f}" if ratio else f"{n:6d}"
            print(f"  |B|={n:3d}  max |M|={m:3d}  bound {bound}")


if __name__ == "__main__":
    main(int(sys.argv[1]) if len(sys.argv) > 1 else 7)
