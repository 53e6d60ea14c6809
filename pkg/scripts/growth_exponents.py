#!/usr/bin/env python3
"""Fit regret growth exponents for the leashed stack over a horizon grid.

For each adversary kind the stack is run at several horizons; the slope of
log10(max(regret, 1)) against log10(T) estimates the growth exponent per
comparator (clamping at 1 keeps negative-regret streams from polluting the
fit). A sublinear stack keeps every exponent well below 1.
"""
import argparse

import numpy as np

from leashed import (
    AdversaryConfig,
    BoundParams,
    StreamAdversary,
    build_learner,
    comparator_sweep,
    run_game,
)


def regrets_at(kind, T, params, seed):
    learner = build_learner("leashed", params)
    adversary = StreamAdversary(AdversaryConfig(kind=kind, seed=seed))
    ledger = run_game(learner, adversary, T)
    return [(float(w), ledger.regret(w)) for w in comparator_sweep(ledger, seed=seed)]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--adversaries", default="constant,alternating,growing,seeded_uniform")
    ap.add_argument("--horizons", default="100,1000,10000,100000")
    ap.add_argument("--k", type=float, default=1.0)
    ap.add_argument("--p", type=float, default=0.5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    kinds = [s.strip() for s in args.adversaries.split(",") if s.strip()]
    horizons = sorted({int(s) for s in args.horizons.split(",") if s.strip()})
    if len(horizons) < 2:
        ap.error("need at least two horizons to fit a slope")
    params = BoundParams(k=args.k, p=args.p)
    log_t = np.log10(horizons)

    print(f"{'adversary':>15} {'comparator':>11} " +
          " ".join(f"R(T={t})".rjust(12) for t in horizons) + f" {'exponent':>9}")
    for kind in kinds:
        per_horizon = [regrets_at(kind, T, params, args.seed) for T in horizons]
        comparators = [w for w, _ in per_horizon[0]]
        worst = 0.0
        for i, w in enumerate(comparators):
            series = [rows[i][1] for rows in per_horizon]
            slope = np.polyfit(log_t, np.log10(np.maximum(series, 1.0)), 1)[0]
            worst = max(worst, slope)
            print(f"{kind:>15} {w:>11g} " +
                  " ".join(f"{r:>12.5g}" for r in series) + f" {slope:>9.4f}")
        print(f"{kind:>15} {'(worst)':>11} " + " " * (13 * len(horizons) - 1) +
              f" {worst:>9.4f}")


if __name__ == "__main__":
    main()
