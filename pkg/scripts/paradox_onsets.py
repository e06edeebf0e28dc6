"""Contradiction onsets of the sweepable inequality chains across black-hole sizes.

Run: python3 scripts/paradox_onsets.py [--steps 200] [--eta 0.05]
"""

import argparse

import numpy as np

from evaplab.paradox import Theorem, TheoremParams, evaporation_sweep


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--steps", type=int, default=200)
    ap.add_argument("--eta", type=float, default=0.05)
    args = ap.parse_args()

    theorems = (Theorem.T1, Theorem.T2, Theorem.T1_HOLOGRAPHIC)
    print(f"{'s_bh':>10} " + " ".join(f"{t.value:>16}" for t in theorems))
    for s_bh in np.geomspace(10, 1e6, 6):
        p = TheoremParams(float(s_bh), eta=args.eta)
        onsets = []
        for t in theorems:
            onset = evaporation_sweep(p, t, args.steps).onset_r
            onsets.append("none" if onset is None else f"{onset / s_bh:.3f} s_bh")
        print(f"{s_bh:10.3g} " + " ".join(f"{o:>16}" for o in onsets))


if __name__ == "__main__":
    main()
