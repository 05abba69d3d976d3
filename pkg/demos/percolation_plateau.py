"""Connection probabilities above and below the proven threshold bounds.

Above the bound (0.3455 for H_{7,3}, 0.3769 for H_{5,4}) the probability of
reaching layer r levels off at a positive value; at p = 0.10 it dies out.
"""

from hyperlat import build_ball, sweep, threshold_bounds

SEED = 20240607


def main(trials: int = 20_000, radius: int = 10) -> None:
    for d, g, grid in ((7, 3, [0.10, 0.30, 0.36, 0.50]), (5, 4, [0.10, 0.35, 0.40, 0.50])):
        tb = threshold_bounds(d, g)
        bound = tb.pc_hyper if g == 3 else tb.pc_quad
        res = sweep(build_ball(d, g, radius), grid, trials, SEED, range(2, radius + 1, 2))
        print(f"H_{{{d},{g}}}  upper bound on p_c: {bound:.5f}")
        for p in grid:
            est = [res.row(p, r).estimate for r in range(2, radius + 1, 2)]
            print(f"  p={p:.2f}  " + "  ".join(f"{e:.4f}" for e in est))


if __name__ == "__main__":
    main()
