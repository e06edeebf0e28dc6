"""Brute-force reference values, frozen into tests/data/oracles.json.

Deliberately independent of the package: Haar states come straight from
normalised complex Gaussian matrices (no QR, no package RNG), the reduced
state is formed explicitly as a Gram matrix M M^dag / tr (smaller side) and diagonalised with eigvalsh.
Page's closed form for the mean entropy is tabulated alongside.

Run: python3 scripts/compute_oracles.py
"""

import json
import math
from fractions import Fraction
from pathlib import Path

import numpy as np

N_QUBITS = 10
SAMPLES = 20000
SEED = 20240611
OUT = Path(__file__).resolve().parents[1] / "tests" / "data" / "oracles.json"


def page_mean_entropy(m: int, n: int) -> float:
    """Exact mean entanglement entropy of the smaller (dim m) factor, m <= n."""
    if m > n:
        m, n = n, m
    harmonic = sum(Fraction(1, k) for k in range(n + 1, m * n + 1))
    return float(harmonic - Fraction(m - 1, 2 * n))


def brute_force_mean(d_a: int, d_b: int, samples: int, rng) -> tuple[float, float]:
    vals = np.empty(samples)
    for i in range(samples):
        g = rng.normal(size=(d_a, d_b)) + 1j * rng.normal(size=(d_a, d_b))
        # the smaller Gram matrix carries the same non-zero spectrum
        rho = g @ g.conj().T if d_a <= d_b else g.conj().T @ g
        rho /= np.trace(rho).real
        ev = np.linalg.eigvalsh(rho)
        ev = ev[ev > 1e-14]
        vals[i] = -np.sum(ev * np.log(ev))
    return float(vals.mean()), float(vals.std(ddof=1) / math.sqrt(samples))


def main():
    rng = np.random.default_rng(SEED)
    cuts = []
    for c in range(N_QUBITS + 1):
        d_a, d_b = 2**c, 2 ** (N_QUBITS - c)
        if min(d_a, d_b) == 1:
            mean, se = 0.0, 0.0
        else:
            mean, se = brute_force_mean(d_a, d_b, SAMPLES, rng)
        page = page_mean_entropy(d_a, d_b)
        cuts.append({"cut": c, "r_qunats": c * math.log(2), "oracle_mean": mean, "oracle_stderr": se,
                     "page_exact": page, "naive_min": min(c, N_QUBITS - c) * math.log(2)})
        print(f"cut {c:2d}: oracle {mean:.6f} +- {se:.2e}   exact {page:.6f}")
    payload = {"n_qubits": N_QUBITS, "samples": SAMPLES, "seed": SEED, "cuts": cuts}
    OUT.write_text(json.dumps(payload, indent=2) + "\n")
    print(f"wrote {OUT}")


if __name__ == "__main__":
    main()
