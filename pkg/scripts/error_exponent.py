"""Bayes-risk decay for testing Poisson(1) against Poisson(4).

Simulates the optimal likelihood-ratio test at several sample sizes and
compares the empirical exponent -log(risk)/n with the Chernoff
information of the pair.

Usage: python scripts/error_exponent.py [trials] [seed]
"""

import math
import sys

from ppdiv import (DiscreteIntensity, bayes_risk_sim, chernoff_info,
                   common_reference)


def main():
    trials = int(sys.argv[1]) if len(sys.argv) > 1 else 500_000
    seed = int(sys.argv[2]) if len(sys.argv) > 2 else 7

    pair = common_reference(DiscreteIntensity([("k", 1.0)]),
                            DiscreteIntensity([("k", 4.0)]))
    info = chernoff_info(pair)
    print(f"chernoff information C = {info.value:.6f} "
          f"at alpha* = {info.argmax_alpha:.6f} "
          f"({info.iterations} objective evaluations)\n")

    print(f"{'n':>4} {'risk':>12} {'std err':>10} {'-log(risk)/n':>14} "
          f"{'ratio to C':>11}")
    for n in (2, 5, 10, 15, 20):
        risk, se = bayes_risk_sim(pair, 0.5, n, trials, seed=seed)
        if risk == 0.0:
            print(f"{n:4d} {'<1/trials':>12} {se:10.2e} {'n/a':>14}")
            continue
        exponent = -math.log(risk) / n
        print(f"{n:4d} {risk:12.3e} {se:10.2e} {exponent:14.4f} "
              f"{exponent / info.value:11.3f}")
    print("\nthe per-sample exponent approaches C from above as n grows")


if __name__ == "__main__":
    main()
