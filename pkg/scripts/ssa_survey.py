"""Minimum strong-subadditivity margin over Haar-random states for several register shapes.

Run: python3 scripts/ssa_survey.py [--samples 1000] [--seed 0]
"""

import argparse
import time

from evaplab.qstate import sampled_ssa_min_margin

SHAPES = [
    {"W": 2, "X": 2, "Y": 2},
    {"W": 2, "X": 2, "Y": 2, "E": 2},
    {"W": 4, "X": 2, "Y": 4, "E": 4},
    {"W": 2, "X": 64, "Y": 2, "E": 16},
    {"W": 8, "X": 4, "Y": 8, "E": 16},
]


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--samples", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    for dims in SHAPES:
        start = time.perf_counter()
        worst = sampled_ssa_min_margin(dims, ["W"], ["X"], ["Y"], args.samples, args.seed)
        print(f"{dims}: min margin {worst:.6f} qunats ({time.perf_counter() - start:.1f}s)")


if __name__ == "__main__":
    main()
