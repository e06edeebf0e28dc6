"""Monte Carlo radiation entropy against the brute-force oracle and the tent curve.

Run: python3 scripts/page_curve_vs_oracle.py [--trials 2000] [--seed 0]
"""

import argparse
import json
import math
from pathlib import Path

from evaplab.page_curve import monte_carlo_curve

ORACLES = Path(__file__).resolve().parents[1] / "tests" / "data" / "oracles.json"


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=2000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    oracle = json.loads(ORACLES.read_text())
    n = oracle["n_qubits"]
    s_bh = n * math.log(2)
    pts = monte_carlo_curve(n, 0, args.trials, seed=args.seed)
    print(f"{'cut':>3} {'r':>7} {'MC mean':>9} {'MC SE':>9} {'oracle':>9} {'exact':>9} {'tent':>7} {'z':>6}")
    for p, o in zip(pts, oracle["cuts"]):
        se = math.hypot(p.s_r_stderr, o["oracle_stderr"])
        z = (p.s_r - o["oracle_mean"]) / se if se > 1e-12 else 0.0
        tent = min(p.r, s_bh - p.r)
        print(
            f"{o['cut']:>3} {p.r:7.4f} {p.s_r:9.6f} {p.s_r_stderr:9.2e} "
            f"{o['oracle_mean']:9.6f} {o['page_exact']:9.6f} {tent:7.4f} {z:6.2f}"
        )
    print(f"max |MC - tent| = {max(abs(p.s_r - min(p.r, s_bh - p.r)) for p in pts):.4f} qunats")


if __name__ == "__main__":
    main()
