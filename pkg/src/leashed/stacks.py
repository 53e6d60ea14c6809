"""Assembly of named learner stacks and their matching guarantees."""
from __future__ import annotations

from typing import Optional

from .bounds import (
    BoundParams,
    StreamStats,
    bettor_bound,
    fixed_diameter_bound,
    full_stack_bound,
    hintless_bound,
)
from .coin_betting import CoinBettor
from .core import Learner
from .reductions import DimFreeLift, Leashed, Truncation, fixed_diameter
from .unit_ball import AdaGradBall, ball_regret_bound

ALGOS = (
    "ons_hints",
    "hintless",
    "leashed",
    "leashed_dimfree",
    "fixed_diameter",
    "adagrad_ball",
)

_SCALAR_ONLY = ("ons_hints", "hintless", "leashed", "fixed_diameter")


def build_learner(
    algo: str,
    params: BoundParams,
    dim: int = 1,
    diameter: Optional[float] = None,
    hint: Optional[float] = None,
) -> Learner:
    """Construct the named stack.

    hint seeds the bettor's initial magnitude promise for ons_hints; the
    wrapped stacks always start from params.g0 and learn the rest. diameter
    is required by fixed_diameter and ignored elsewhere.
    """
    if algo not in ALGOS:
        raise ValueError(f"unknown algorithm {algo!r}, expected one of {ALGOS}")
    if dim < 1:
        raise ValueError(f"dimension must be >= 1, got {dim}")
    if algo in _SCALAR_ONLY and dim != 1:
        raise ValueError(f"{algo} plays a one-dimensional game, got dim={dim}")

    def bettor(h1: float) -> CoinBettor:
        return CoinBettor(epsilon=params.epsilon, alpha=params.alpha, h1=h1)

    if algo == "ons_hints":
        h1 = params.g0 if hint is None else hint
        return bettor(h1)
    if algo == "hintless":
        return Truncation(bettor(params.g0), g0=params.g0)
    if algo == "leashed":
        return Leashed(bettor(params.g0), k=params.k, p=params.p, g0=params.g0)
    if algo == "leashed_dimfree":
        scalar = Leashed(bettor(params.g0), k=params.k, p=params.p, g0=params.g0)
        return DimFreeLift(scalar, AdaGradBall(dim), dim)
    if algo == "fixed_diameter":
        if diameter is None:
            raise ValueError("fixed_diameter needs a diameter")
        return fixed_diameter(bettor(params.g0), diameter, g0=params.g0)
    return AdaGradBall(dim)


def stack_bound(
    algo: str,
    params: BoundParams,
    stats: StreamStats,
    w_abs: float,
    diameter: Optional[float] = None,
    max_played: Optional[float] = None,
) -> float:
    """The guarantee matching the named stack, at comparator norm w_abs.

    For leashed_dimfree the scalar guarantee is evaluated on the norm stream
    and the ball guarantee enters scaled by the comparator norm, mirroring
    the regret decomposition of the lift. For adagrad_ball the value is only
    a guarantee when w_abs <= 1.
    """
    if algo == "ons_hints":
        return bettor_bound(params, stats, w_abs)
    if algo == "hintless":
        if max_played is None:
            raise ValueError("hintless bound needs the largest played norm")
        return hintless_bound(params, stats, w_abs, max_played)
    if algo == "leashed":
        return full_stack_bound(params, stats, w_abs)
    if algo == "leashed_dimfree":
        scalar = full_stack_bound(params, stats, w_abs)
        return scalar + w_abs * ball_regret_bound(stats.sum_sq)
    if algo == "fixed_diameter":
        if diameter is None:
            raise ValueError("fixed_diameter bound needs the diameter")
        return fixed_diameter_bound(params, stats, w_abs, diameter)
    if algo == "adagrad_ball":
        return ball_regret_bound(stats.sum_sq)
    raise ValueError(f"unknown algorithm {algo!r}, expected one of {ALGOS}")
