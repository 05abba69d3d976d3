"""Boundary-to-volume ratios of hyperbolic balls approach the golden ratio.

Both H_{7,3} and H_{5,4} have the same limiting ratio, 1.618..., while the
flat triangular lattice has ratio tending to zero.
"""

from hyperlat import alpha, build_ball, cheeger_sequence


def main(radius: int = 9) -> None:
    for d, g in ((7, 3), (5, 4), (6, 3)):
        rep = cheeger_sequence(build_ball(d, g, radius))
        print(f"H_{{{d},{g}}}  target {rep.target:.6f}")
        for row in rep.rows:
            print(f"  n={row.n:2d}  |B_n|={row.ball:7d}  |dB_n|={row.boundary:7d}  ratio={row.ratio:.5f}")
    print(f"alpha_7 = {alpha(7):.12f}")


if __name__ == "__main__":
    main()
