"""Command-line harness: single runs with traces, acceptance checks, sweeps.

Settings resolve in precedence order: command-line flags, then environment
variables prefixed LEASHED_ (e.g. LEASHED_T), then a JSON config file given
via --config, then built-in defaults. Trace and summary files land in the
directory named by --out, which must already exist.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Optional, Union

import numpy as np

from .adversaries import KINDS, AdversaryConfig, StreamAdversary, comparator_sweep
from .bounds import BoundParams, StreamStats, bettor_bound
from .core import GameDivergence, Learner, RegretLedger, _dot, dual_norm, run_game
from .stacks import ALGOS, build_learner, stack_bound
from .acceptance import SUITES, format_result, run_suite

ENV_PREFIX = "LEASHED_"

_DEFAULTS = {
    "algo": "leashed",
    "adversary": "constant",
    "T": 1000,
    "dim": 1,
    "k": 1.0,
    "p": 0.5,
    "eps": 1.0,
    "alpha": 1.0,
    "g0": 1.0,
    "D": None,
    "seed": 0,
    "comparators": "auto",
    "out": ".",
    "scale": 1.0,
    "rate": 0.5,
    "period": 10,
    "magnitude": 10.0,
    "envelope": 1.0,
    "jobs": 1,
}

_CASTS = {
    "algo": str,
    "adversary": str,
    "T": int,
    "dim": int,
    "k": float,
    "p": float,
    "eps": float,
    "alpha": float,
    "g0": float,
    "D": float,
    "seed": int,
    "comparators": str,
    "out": str,
    "scale": float,
    "rate": float,
    "period": int,
    "magnitude": float,
    "envelope": float,
    "jobs": int,
}

TRACE_COLUMNS = ("t", "w_norm", "g_norm", "hint", "barrier", "wealth", "cum_loss")


class TraceRecorder(Learner):
    """Pass-through learner that snapshots introspection fields each round."""

    def __init__(self, inner: Learner):
        self.inner = inner
        self.hints: list = []
        self.barriers: list = []
        self.wealths: list = []

    @property
    def current_hint(self):
        return self.inner.current_hint

    @property
    def barrier(self):
        return self.inner.barrier

    @property
    def wealth(self):
        return self.inner.wealth

    def play(self):
        w = self.inner.play()
        self.hints.append(self.inner.current_hint)
        self.barriers.append(self.inner.barrier)
        return w

    def update(self, g) -> None:
        self.inner.update(g)
        self.wealths.append(self.inner.wealth)


def _load_config(path: Optional[str]) -> dict:
    if not path:
        return {}
    with open(path, "r", encoding="utf-8") as fh:
        cfg = json.load(fh)
    if not isinstance(cfg, dict):
        raise ValueError("config file must hold a JSON object")
    return cfg


def _resolve(args: argparse.Namespace, file_cfg: dict, key: str):
    value = getattr(args, key, None)
    if value is not None:
        return value
    env = os.environ.get(ENV_PREFIX + key.upper())
    if env is not None:
        return _CASTS[key](env)
    if key in file_cfg:
        raw = file_cfg[key]
        return raw if raw is None else _CASTS[key](raw)
    return _DEFAULTS[key]


def _settings(args: argparse.Namespace, keys) -> dict:
    file_cfg = _load_config(getattr(args, "config", None))
    return {key: _resolve(args, file_cfg, key) for key in keys}


def _fmt(x: Union[float, None]) -> str:
    return "" if x is None else format(float(x), ".17g")


def _parse_listish(raw, cast) -> list:
    if isinstance(raw, (list, tuple)):
        return [cast(v) for v in raw]
    parts = [p.strip() for p in str(raw).split(",") if p.strip()]
    return [cast(p) for p in parts]


def _hint_for(algo: str, adv: StreamAdversary) -> Optional[float]:
    if algo != "ons_hints":
        return None
    cap = adv.bound()
    if cap is None or cap <= 0.0:
        return None  # fall back to g0; an unbounded stream will abort on contract
    return cap


def _ball_comparators(ledger: RegretLedger, seed: int) -> list:
    """Comparator set kept inside the unit ball for the ball-only learner."""
    magnitudes = (0.1, 0.5, 1.0)
    d = ledger.dim
    if d is None or d == 1:
        out = [0.0]
        for m in magnitudes:
            out.extend((m, -m))
        return out
    full = comparator_sweep(ledger, seed=seed)
    return [w for w in full if dual_norm(w) <= 1.0 + 1e-12]


def _comparator_label(wc) -> str:
    if isinstance(wc, np.ndarray):
        return f"|w|={dual_norm(wc):.6g}"
    return format(float(wc), ".12g")


def _summary_rows(algo: str, params: BoundParams, ledger: RegretLedger,
                  stats: StreamStats, comparators, diameter) -> list:
    rows = []
    for wc in comparators:
        w_abs = dual_norm(wc) if isinstance(wc, np.ndarray) else abs(float(wc))
        regret = ledger.regret(wc)
        bb = bettor_bound(params, stats, w_abs)
        sb = stack_bound(
            algo, params, stats, w_abs,
            diameter=diameter, max_played=ledger.max_played_norm,
        )
        rows.append(
            {
                "comparator": [float(x) for x in wc] if isinstance(wc, np.ndarray) else float(wc),
                "comparator_norm": w_abs,
                "regret": regret,
                "bettor_bound": bb,
                "stack_bound": sb,
                "ratio": (regret / sb) if sb > 0.0 else None,
            }
        )
    return rows


def cmd_run(args: argparse.Namespace) -> int:
    keys = (
        "algo", "adversary", "T", "dim", "k", "p", "eps", "alpha", "g0", "D",
        "seed", "comparators", "out", "scale", "rate", "period", "magnitude",
        "envelope",
    )
    try:
        s = _settings(args, keys)
    except (OSError, ValueError, json.JSONDecodeError) as exc:
        print(f"bad configuration: {exc}", file=sys.stderr)
        return 2
    out_dir = Path(s["out"])
    if not out_dir.is_dir():
        print(f"output directory {out_dir} does not exist", file=sys.stderr)
        return 1
    try:
        params = BoundParams(
            epsilon=s["eps"], alpha=s["alpha"], k=s["k"], p=s["p"], g0=s["g0"]
        )
        adv_cfg = AdversaryConfig(
            s["adversary"], scale=s["scale"], dim=s["dim"], seed=s["seed"],
            rate=s["rate"], period=s["period"], magnitude=s["magnitude"],
            envelope=s["envelope"],
        )
        adversary = StreamAdversary(adv_cfg)
        learner = build_learner(
            s["algo"], params, dim=s["dim"], diameter=s["D"],
            hint=_hint_for(s["algo"], adversary),
        )
    except ValueError as exc:
        print(f"bad configuration: {exc}", file=sys.stderr)
        return 2
    recorder = TraceRecorder(learner)
    try:
        ledger = run_game(recorder, adversary, s["T"])
    except (GameDivergence, ValueError) as exc:
        print(f"run aborted: {exc}", file=sys.stderr)
        return 1

    trace_path = out_dir / "trace.csv"
    cum = 0.0
    with open(trace_path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(TRACE_COLUMNS)
        for i, r in enumerate(ledger.rounds):
            cum += _dot(r.grad, r.played)
            cells = (
                dual_norm(r.played), dual_norm(r.grad), recorder.hints[i],
                recorder.barriers[i], recorder.wealths[i], cum,
            )
            for x in cells:
                if x is not None and not math.isfinite(x):
                    print(f"non-finite trace value at round {r.t}", file=sys.stderr)
                    return 1
            writer.writerow((r.t,) + tuple(_fmt(x) for x in cells))

    stats = StreamStats.from_ledger(ledger, g0=s["g0"])
    if s["comparators"] == "auto":
        if s["algo"] == "adagrad_ball":
            comparators = _ball_comparators(ledger, s["seed"])
        else:
            comparators = comparator_sweep(ledger, seed=s["seed"])
    else:
        if (ledger.dim or 1) != 1:
            print("explicit comparators are scalars; use auto for dim > 1", file=sys.stderr)
            return 2
        try:
            comparators = _parse_listish(s["comparators"], float)
        except ValueError as exc:
            print(f"bad comparators: {exc}", file=sys.stderr)
            return 2
        if not comparators:
            print("empty comparator list", file=sys.stderr)
            return 2
    summary = {
        "algo": s["algo"],
        "adversary": {
            "kind": s["adversary"], "scale": s["scale"], "dim": s["dim"],
            "seed": s["seed"], "rate": s["rate"], "period": s["period"],
            "magnitude": s["magnitude"], "envelope": s["envelope"],
        },
        "T": s["T"],
        "dim": s["dim"],
        "params": {
            "epsilon": s["eps"], "alpha": s["alpha"], "k": s["k"],
            "p": s["p"], "g0": s["g0"],
        },
        "diameter": s["D"],
        "stats": {
            "T": stats.T, "sum_sq": stats.sum_sq, "sum_abs": stats.sum_abs,
            "G": stats.G, "h_T": stats.h_T, "max_ratio": stats.max_ratio,
            "max_played_norm": ledger.max_played_norm,
        },
        "comparators": _summary_rows(
            s["algo"], params, ledger, stats, comparators, s["D"]
        ),
    }
    summary_path = out_dir / "summary.json"
    with open(summary_path, "w", encoding="utf-8") as fh:
        json.dump(summary, fh, indent=2)
        fh.write("\n")
    print(f"wrote {trace_path} and {summary_path}")
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    results = run_suite(args.suite)
    for r in results:
        print(format_result(r))
    n_pass = sum(r.passed for r in results)
    print(f"{n_pass}/{len(results)} criteria passed")
    return 0 if n_pass == len(results) else 1


def _sweep_cell(cell: dict) -> list:
    params = BoundParams(
        epsilon=cell["eps"], alpha=cell["alpha"], k=cell["k"], p=cell["p"],
        g0=cell["g0"],
    )
    adversary = StreamAdversary(
        AdversaryConfig(
            cell["adversary"], scale=cell["scale"], dim=cell["dim"],
            seed=cell["seed"], rate=cell["rate"], period=cell["period"],
            magnitude=cell["magnitude"], envelope=cell["envelope"],
        )
    )
    learner = build_learner(
        cell["algo"], params, dim=cell["dim"], diameter=cell["D"],
        hint=_hint_for(cell["algo"], adversary),
    )
    ledger = run_game(learner, adversary, cell["T"])
    stats = StreamStats.from_ledger(ledger, g0=cell["g0"])
    if cell["comparators"] == "auto":
        comparators = comparator_sweep(ledger, seed=cell["seed"])
    else:
        comparators = _parse_listish(cell["comparators"], float)
    rows = []
    for wc in comparators:
        w_abs = dual_norm(wc) if isinstance(wc, np.ndarray) else abs(float(wc))
        regret = ledger.regret(wc)
        bound = stack_bound(
            cell["algo"], params, stats, w_abs,
            diameter=cell["D"], max_played=ledger.max_played_norm,
        )
        rows.append(
            {
                "k": cell["k"], "p": cell["p"], "adversary": cell["adversary"],
                "T": cell["T"], "comparator": _comparator_label(wc),
                "regret": regret, "bound": bound,
                "ratio": (regret / bound) if bound > 0.0 else None,
            }
        )
    return rows


def cmd_sweep(args: argparse.Namespace) -> int:
    keys = (
        "algo", "dim", "eps", "alpha", "g0", "D", "seed", "comparators",
        "out", "scale", "rate", "period", "magnitude", "envelope", "jobs",
    )
    try:
        s = _settings(args, keys)
        file_cfg = _load_config(getattr(args, "config", None))
        grids = {}
        for key, cast in (("k", float), ("p", float), ("adversary", str), ("T", int)):
            raw = getattr(args, key, None)
            if raw is None:
                raw = os.environ.get(ENV_PREFIX + key.upper())
            if raw is None:
                raw = file_cfg.get(key)
            if raw is None:
                raw = _DEFAULTS[key]
            grids[key] = _parse_listish(raw, cast)
    except (OSError, ValueError, json.JSONDecodeError) as exc:
        print(f"bad configuration: {exc}", file=sys.stderr)
        return 2
    if any(not v for v in grids.values()):
        empty = [k for k, v in grids.items() if not v]
        print(f"empty sweep grid for {', '.join(empty)}", file=sys.stderr)
        return 2
    for kind in grids["adversary"]:
        if kind not in KINDS:
            print(f"unknown adversary kind {kind!r}, expected one of {KINDS}", file=sys.stderr)
            return 2
    out_dir = Path(s["out"])
    if not out_dir.is_dir():
        print(f"output directory {out_dir} does not exist", file=sys.stderr)
        return 1
    cells = [
        {
            "k": k, "p": p, "adversary": kind, "T": T,
            "algo": s["algo"], "dim": s["dim"], "eps": s["eps"],
            "alpha": s["alpha"], "g0": s["g0"], "D": s["D"], "seed": s["seed"],
            "scale": s["scale"], "rate": s["rate"], "period": s["period"],
            "magnitude": s["magnitude"], "envelope": s["envelope"],
            "comparators": s["comparators"],
        }
        for k in grids["k"]
        for p in grids["p"]
        for kind in grids["adversary"]
        for T in grids["T"]
    ]
    try:
        if s["jobs"] > 1:
            with ProcessPoolExecutor(max_workers=s["jobs"]) as pool:
                chunks = list(pool.map(_sweep_cell, cells))
        else:
            chunks = [_sweep_cell(cell) for cell in cells]
    except (GameDivergence, ValueError) as exc:
        print(f"sweep aborted: {exc}", file=sys.stderr)
        return 1
    rows = [row for chunk in chunks for row in chunk]

    sweep_path = out_dir / "sweep.csv"
    with open(sweep_path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(("k", "p", "adversary", "T", "comparator", "regret", "bound", "ratio"))
        for row in rows:
            writer.writerow(
                (
                    _fmt(row["k"]), _fmt(row["p"]), row["adversary"], row["T"],
                    row["comparator"], _fmt(row["regret"]), _fmt(row["bound"]),
                    _fmt(row["ratio"]) if row["ratio"] is not None else "",
                )
            )
    written = [str(sweep_path)]

    if len(set(grids["T"])) >= 2:
        # growth exponent of clamped regret across the horizon grid
        groups = {}
        for row in rows:
            key = (row["k"], row["p"], row["adversary"], row["comparator"])
            groups.setdefault(key, []).append((row["T"], row["regret"]))
        exp_path = out_dir / "exponents.csv"
        with open(exp_path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(("k", "p", "adversary", "comparator", "exponent"))
            for (k, p, kind, label), pts in sorted(groups.items()):
                pts = sorted(pts)
                if len({t for t, _ in pts}) < 2:
                    continue
                xs = [math.log10(t) for t, _ in pts]
                ys = [math.log10(max(r, 1.0)) for _, r in pts]
                slope = float(np.polyfit(xs, ys, 1)[0])
                writer.writerow((_fmt(k), _fmt(p), kind, label, _fmt(slope)))
        written.append(str(exp_path))
    print("wrote " + " and ".join(written))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="leashed",
        description="Parameter-free online linear optimization with adaptive constraints.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser, listy: bool) -> None:
        if listy:
            p.add_argument("--k", help="comma-separated barrier scales")
            p.add_argument("--p", help="comma-separated barrier exponents")
            p.add_argument("--adversary", help="comma-separated adversary kinds")
            p.add_argument("--T", help="comma-separated horizons")
        else:
            p.add_argument("--k", type=float, help="barrier scale")
            p.add_argument("--p", type=float, help="barrier exponent in (0, 1]")
            p.add_argument("--adversary", choices=KINDS, help="gradient stream kind")
            p.add_argument("--T", type=int, help="number of rounds")
        p.add_argument("--algo", choices=ALGOS, help="learner stack")
        p.add_argument("--dim", type=int, help="game dimension")
        p.add_argument("--eps", type=float, help="initial wealth")
        p.add_argument("--alpha", type=float, help="curvature seed for the betting update")
        p.add_argument("--g0", type=float, help="initial magnitude guess")
        p.add_argument("--D", type=float, help="diameter for the fixed_diameter stack")
        p.add_argument("--seed", type=int, help="seed for adversaries and comparators")
        p.add_argument("--comparators", help='"auto" or comma-separated scalars')
        p.add_argument("--out", help="existing output directory")
        p.add_argument("--scale", type=float, help="gradient scale")
        p.add_argument("--rate", type=float, help="growth rate for the growing kind")
        p.add_argument("--period", type=int, help="spike period")
        p.add_argument("--magnitude", type=float, help="spike magnitude")
        p.add_argument("--envelope", type=float, help="magnitude cap for seeded kinds")
        p.add_argument("--config", help="JSON file with default settings")

    run_p = sub.add_parser("run", help="play one game; write trace.csv and summary.json")
    add_common(run_p, listy=False)
    run_p.set_defaults(func=cmd_run)

    verify_p = sub.add_parser("verify", help="run acceptance criteria")
    verify_p.add_argument(
        "suite", nargs="?", default="all", choices=tuple(SUITES),
        help="criterion group to run",
    )
    verify_p.set_defaults(func=cmd_verify)

    sweep_p = sub.add_parser("sweep", help="grid of games; write sweep.csv and exponents.csv")
    add_common(sweep_p, listy=True)
    sweep_p.add_argument("--jobs", type=int, help="parallel worker processes")
    sweep_p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)
