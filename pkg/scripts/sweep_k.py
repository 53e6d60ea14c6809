#!/usr/bin/env python3
"""Grid the leash stiffness k and compare realized regret to the guarantee.

Each cell runs the full leashed stack against one gradient stream, then
reports regret, the closed-form bound, and their ratio for every standard
comparator. Cells whose game diverges are reported as such.
"""
import argparse
import math

from leashed import (
    AdversaryConfig,
    BoundParams,
    GameDivergence,
    StreamAdversary,
    StreamStats,
    build_learner,
    comparator_sweep,
    dual_norm,
    run_game,
    stack_bound,
)


def one_cell(kind, k, p, T, seed):
    params = BoundParams(k=k, p=p)
    learner = build_learner("leashed", params)
    adversary = StreamAdversary(AdversaryConfig(kind=kind, seed=seed))
    ledger = run_game(learner, adversary, T)
    stats = StreamStats.from_ledger(ledger, g0=params.g0)
    rows = []
    for w in comparator_sweep(ledger, seed=seed):
        regret = ledger.regret(w)
        bound = stack_bound("leashed", params, stats, dual_norm(w))
        rows.append((float(w), regret, bound))
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--ks", default="0.1,1,10", help="comma list of leash stiffnesses")
    ap.add_argument("--p", type=float, default=0.5, help="barrier growth exponent")
    ap.add_argument("--adversaries", default="constant,alternating,seeded_uniform")
    ap.add_argument("--T", type=int, default=2000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    ks = [float(s) for s in args.ks.split(",") if s.strip()]
    kinds = [s.strip() for s in args.adversaries.split(",") if s.strip()]
    header = f"{'adversary':>15} {'k':>8} {'comparator':>11} {'regret':>13} {'bound':>13} {'ratio':>8}"
    print(header)
    print("-" * len(header))
    for kind in kinds:
        for k in ks:
            try:
                rows = one_cell(kind, k, args.p, args.T, args.seed)
            except GameDivergence as exc:
                print(f"{kind:>15} {k:>8g}  diverged: {exc}")
                continue
            for w, regret, bound in rows:
                ratio = regret / bound if bound > 0 else math.nan
                print(f"{kind:>15} {k:>8g} {w:>11g} {regret:>13.5g} {bound:>13.5g} {ratio:>8.4f}")


if __name__ == "__main__":
    main()
