"""Sweep divergence orders for a pair of intensities and cross-check the
closed forms against Monte Carlo likelihood-ratio estimates.

Usage: python scripts/divergence_sweep.py [n_samples] [seed]
"""

import sys

from ppdiv import (GridIntensity, common_reference, hellinger_measures,
                   hellinger_pp, mc_divergence_estimate, tsallis)


def main():
    n_samples = int(sys.argv[1]) if len(sys.argv) > 1 else 200_000
    seed = int(sys.argv[2]) if len(sys.argv) > 2 else 1

    lam = GridIntensity([(0.0, 1.0)], [4], [2.0, 0.5, 1.5, 3.0])
    mu = GridIntensity([(0.0, 1.0)], [4], [1.0, 1.0, 2.0, 1.0])
    pair = common_reference(lam, mu)

    print(f"{'alpha':>6} {'closed form':>14} {'monte carlo':>14} "
          f"{'std err':>10} {'dev/se':>8}")
    for alpha in (0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 2.0):
        closed = tsallis(pair, alpha).value
        est, se = mc_divergence_estimate(pair, alpha, n_samples, seed=seed)
        dev = abs(est - closed) / se if se > 0 else 0.0
        print(f"{alpha:6.2f} {closed:14.6f} {est:14.6f} {se:10.6f} {dev:8.2f}")

    h = hellinger_measures(pair)
    print(f"\nhellinger distance of the intensities: {h:.6f}")
    print(f"hellinger distance of the pattern laws: {hellinger_pp(pair):.6f}")


if __name__ == "__main__":
    main()
