#!/usr/bin/env python3
"""Solve the closure equations for a grid of corner exponents and report geometry.

Usage: python scripts/solve_closure_demo.py [seed]
"""

import math
import sys

from intertwiner.geometry import geometry_angles, solve_closure


def main(argv):
    seed = int(argv[1]) if len(argv) > 1 else 0
    cases = [
        (1, 1, 1, 1, 1, 1),
        (2, 2, 2, 2, 2, 2),
        (2, 1, 1, 1, 1, 2),
        (3, 2, 1, 1, 2, 3),
        (1, 1, 0, 1, 0, 0),
        (9, 0, 0, 0, 0, 9),
    ]
    print("corners -> residual, corner reconstruction error, geometric flag, dihedral cosines")
    for corners in cases:
        sol = solve_closure(corners, seed=seed)
        coss = ""
        if sol.geometric and sum(corners) > 0 and all(v > 0 for v in sol.two_js()):
            ang = geometry_angles(sol.spinors)
            coss = " cos(theta) = " + ", ".join(
                f"{math.cos(v):+.4f}" for v in sorted(ang["theta"].values())
            )
        print(
            f"{corners}: residual {sol.residual:.2e}, khat_err {sol.khat_error:.2e}, "
            f"geometric={sol.geometric}{coss}"
        )


if __name__ == "__main__":
    main(sys.argv)
