"""Closed-form regret guarantees, evaluated numerically.

Every evaluator takes the hyperparameters and a summary of the gradient
stream and returns the value of the corresponding proven bound; the
verification suite compares these values against measured regret with no
tolerance. Logarithm arguments are assembled in log space so that streams
with enormous squared-gradient mass cannot overflow.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .core import RegretLedger, dual_norm

DEFAULT_Q_GRID = (0.0, 1.0 / 3.0, 0.5, 1.0)

SIMPLIFIED_SETTINGS = ("p_half_q_zero", "p_third_q_third")


@dataclass(frozen=True)
class BoundParams:
    """Hyperparameters shared by the learning stack and its guarantees."""

    epsilon: float = 1.0   # initial wealth
    alpha: float = 1.0     # Newton accumulator seed
    k: float = 1.0         # barrier scale
    p: float = 0.5         # barrier exponent
    g0: float = 1.0        # a-priori gradient magnitude guess
    q_grid: Sequence[float] = DEFAULT_Q_GRID

    def __post_init__(self):
        if self.epsilon <= 0.0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")
        if self.alpha <= 0.0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")
        if self.k <= 0.0:
            raise ValueError(f"k must be positive, got {self.k}")
        if not 0.0 < self.p <= 1.0:
            raise ValueError(f"p must lie in (0, 1], got {self.p}")
        if self.g0 <= 0.0:
            raise ValueError(f"g0 must be positive, got {self.g0}")
        if not self.q_grid:
            raise ValueError("q_grid must be nonempty")
        for q in self.q_grid:
            if not 0.0 <= q <= 1.0:
                raise ValueError(f"every q must lie in [0, 1], got {q}")


@dataclass(frozen=True)
class StreamStats:
    """Gradient-stream summary consumed by the bound evaluators.

    h_T is the final fabricated hint max(g0, G); max_ratio is the largest
    prefix value of (sum of |g_i| up to t) / (max |g_i| up to t), the
    quantity that drives barrier growth.
    """

    T: int
    sum_sq: float
    sum_abs: float
    G: float
    h_T: float
    max_ratio: float

    @classmethod
    def from_norms(cls, norms: Iterable[float], g0: float) -> "StreamStats":
        if g0 <= 0.0:
            raise ValueError(f"g0 must be positive, got {g0}")
        T = 0
        sum_sq = 0.0
        sum_abs = 0.0
        g_max = 0.0
        max_ratio = 0.0
        for n in norms:
            n = float(n)
            if n < 0.0:
                raise ValueError("gradient norms cannot be negative")
            T += 1
            sum_sq += n * n
            sum_abs += n
            if n > g_max:
                g_max = n
            if g_max > 0.0:
                ratio = sum_abs / g_max
                if ratio > max_ratio:
                    max_ratio = ratio
        return cls(T=T, sum_sq=sum_sq, sum_abs=sum_abs, G=g_max,
                   h_T=max(g0, g_max), max_ratio=max_ratio)

    @classmethod
    def from_ledger(cls, ledger: RegretLedger, g0: float) -> "StreamStats":
        return cls.from_norms((dual_norm(r.grad) for r in ledger.rounds), g0)


def _softplus(x: float) -> float:
    """log(1 + e^x) without overflow; x may be -inf."""
    if x > 40.0:
        return x
    if x < -745.0:
        return 0.0
    if x > 0.0:
        return x + math.log1p(math.exp(-x))
    return math.log1p(math.exp(x))


def bettor_bound(params: BoundParams, stats: StreamStats, w_abs: float) -> float:
    """Regret guarantee of the hint-consuming coin bettor at comparator
    magnitude w_abs. Equals epsilon exactly at the origin."""
    w = abs(float(w_abs))
    eps, a = params.epsilon, params.alpha
    h, s = stats.h_T, stats.sum_sq
    if w == 0.0:
        return eps
    ln_x = (math.log(16.0 * w * h / eps) + a / (4.0 * h * h)
            + 4.5 * math.log1p(s / a))
    arm1 = 8.0 * h * (ln_x - 1.0)
    if s == 0.0:
        arm2 = 0.0
    else:
        ln_arg = (math.log(4.0) + 10.0 * math.log(s) + a / (2.0 * h * h)
                  + 2.0 * math.log(w / eps))
        arm2 = 2.0 * math.sqrt(s * _softplus(ln_arg))
    return eps + w * max(arm1, arm2)


def _leash_terms(params: BoundParams, stats: StreamStats, w_abs: float) -> float:
    """Barrier cost plus comparator terms added by the Leashed wrapper."""
    G = stats.G
    if G == 0.0:
        return 0.0
    barrier = G * params.k * stats.max_ratio ** params.p
    penalty = min(
        G * w_abs ** (1.0 + (1.0 - q) / params.p)
        / params.k ** ((1.0 - q) / params.p)
        * (stats.sum_abs / G) ** q
        for q in params.q_grid
    )
    return barrier + 2.0 * G * w_abs + penalty


def leash_bound(params: BoundParams, stats: StreamStats, w_abs: float,
                inner_bound: float) -> float:
    """Guarantee of the Leashed wrapper around any scalar learner whose own
    regret at (w_abs, hint max(g0, G)) is at most inner_bound."""
    return 2.0 * inner_bound + _leash_terms(params, stats, abs(float(w_abs)))


def full_stack_bound(params: BoundParams, stats: StreamStats, w_abs: float) -> float:
    """End-to-end guarantee of the Leashed coin bettor with fabricated
    hints, fully expanded."""
    w = abs(float(w_abs))
    eps, a = params.epsilon, params.alpha
    h, s = stats.h_T, stats.sum_sq
    if w == 0.0:
        comparator_part = 0.0
    else:
        ln_x = (math.log(16.0 * w * h / eps) + a / (4.0 * h * h)
                + 4.5 * math.log1p(s / a))
        arm1 = 8.0 * h * ln_x - h
        if s == 0.0:
            arm2 = 0.0
        else:
            ln_arg = (math.log(4.0) + 10.0 * math.log(s) + a / (4.0 * h * h)
                      + 2.0 * math.log(w / eps))
            arm2 = 2.0 * math.sqrt(s * _softplus(ln_arg))
        comparator_part = 2.0 * w * max(arm1, arm2)
    return 2.0 * eps + comparator_part + _leash_terms(params, stats, w)


def hintless_bound(params: BoundParams, stats: StreamStats, w_abs: float,
                   max_played: float) -> float:
    """Guarantee of the plain truncation wrapper around the coin bettor:
    the bettor's own bound at hint max(g0, G) plus the truncation damage."""
    w = abs(float(w_abs))
    return bettor_bound(params, stats, w) + stats.G * (max_played + w)


def fixed_diameter_bound(params: BoundParams, stats: StreamStats, w_abs: float,
                         diameter: float) -> float:
    """Guarantee of the constant-barrier stack. For comparators inside the
    diameter this is the surrogate composition 2 * inner + G * (D + |w|);
    outside, the projection gap of the comparator is charged too."""
    w = abs(float(w_abs))
    out = 2.0 * bettor_bound(params, stats, w) + stats.G * (diameter + w)
    if w > diameter:
        out += stats.sum_abs * (w - diameter)
    return out


def conjugate_bound(a: float, b: float, c: float, theta: float) -> float:
    """Cap on the Fenchel conjugate of f(x) = a * exp(b x^2 / (|x| + c))
    at theta, for a, b > 0 and c >= 0. Zero at theta = 0."""
    if a <= 0.0 or b <= 0.0:
        raise ValueError(f"a and b must be positive, got a={a}, b={b}")
    if c < 0.0:
        raise ValueError(f"c must be nonnegative, got {c}")
    t = abs(float(theta))
    if t == 0.0:
        return 0.0
    # Split the sup at |x| = c.  On |x| >= c the exponent is at least b|x|/2,
    # on |x| <= c it is at least b x^2 / (2c); each minorant has a closed-form
    # conjugate cap and the true conjugate is at most the larger of the two.
    arm1 = t * (2.0 / b) * (math.log(2.0 * t / (a * b)) - 1.0)
    arm2 = t * math.sqrt((2.0 * c / b) * math.log1p(2.0 * c * t * t / (a * a * b))) - a
    return max(arm1, arm2)


def simplified_bound(setting: str, stats: StreamStats, w_abs: float,
                     k: float = 1.0) -> float:
    """Constant-free growth templates for exponent reporting.

    Not rigorous upper bounds; use the evaluators above for verification.
    """
    w = abs(float(w_abs))
    T, G = stats.T, stats.G
    if setting == "p_half_q_zero":
        return (w + k) * G * math.sqrt(T) + G * w + G * w ** 3 / k ** 2
    if setting == "p_third_q_third":
        return w * G * math.sqrt(T) + G * w + (w ** 3 / k ** 2 + k) * G * T ** (1.0 / 3.0)
    raise ValueError(f"unknown setting {setting!r}, expected one of {SIMPLIFIED_SETTINGS}")
