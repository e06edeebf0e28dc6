"""Cross-block mutual information against separation for a range of on-site frequencies.

The gapped chain decays exponentially; as self_freq -> 0 the fitted rate
collapses, reflecting the slower decay of the nearly massless chain.

Run: python3 scripts/lattice_decay_scan.py [--n-sites 60] [--d-max 12]
"""

import argparse

from evaplab.errors import InsufficientDataError
from evaplab.lattice import HarmonicChain, entanglement_vs_separation, fit_decay


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n-sites", type=int, default=60)
    ap.add_argument("--d-max", type=int, default=12)
    ap.add_argument("--block-size", type=int, default=1)
    args = ap.parse_args()

    for w0 in (2.0, 1.0, 0.5, 0.1, 0.0):
        chain = HarmonicChain(args.n_sites, self_freq=w0)
        series = entanglement_vs_separation(chain, args.block_size, args.d_max)
        head = " ".join(f"{m:.2e}" for _, m in series[:5])
        try:
            fit = fit_decay(series)
            summary = f"rate {fit.rate:.3f}, r^2 {fit.r_squared:.4f}, points {fit.points_used}"
        except InsufficientDataError as exc:
            summary = str(exc)
        print(f"self_freq {w0:4.1f}: MI[0..4] {head} | {summary}")


if __name__ == "__main__":
    main()
