"""Scalar coin-betting learner driven by an online Newton step.

The learner keeps a positive wealth and wagers the signed fraction v of it
each round, playing w = v * wealth. After seeing the gradient g it loses
g * w, i.e. wealth multiplies by (1 - g * v). The fraction is updated by a
projected Newton step on the log-wealth losses -ln(1 - g v), whose domain is
kept safe by a magnitude hint: the hint h delivered with each gradient
promises |g_next| <= h and shrinks the admissible fractions to
[-1/(2h), 1/(2h)]. That keeps every wealth factor inside [1/2, 3/2], so
wealth never dies and never more than multiplies by 3/2 in a round.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

from .core import HintedLearner

# Step coefficient of the projected Newton update, 2 / (2 - ln 3). The losses
# -ln(1 - g v) are 1-exp-concave on every wealth factor the hint allows, with
# curvature constant (2 - ln 3) / 2.
ONS_STEP = 2.0 / (2.0 - math.log(3.0))


@dataclass
class BettingTrace:
    """Per-round history of the inner betting game."""

    vs: list = field(default_factory=list)       # fraction wagered
    gs: list = field(default_factory=list)       # gradient received
    zs: list = field(default_factory=list)       # loss derivative at the wagered fraction
    hints: list = field(default_factory=list)    # hint in force at bet time
    bets: list = field(default_factory=list)     # point played, v * wealth
    wealths: list = field(default_factory=list)  # wealth after the round

    def __len__(self) -> int:
        return len(self.gs)


class CoinBettor(HintedLearner):
    """Parameter-free scalar learner; regret adapts to the comparator size.

    epsilon is the initial wealth, alpha seeds the Newton accumulator, and h1
    is the hint in force for the first round. When update is called without
    an explicit next hint the current one is carried forward, which makes the
    bettor directly playable in a game whose gradients respect a fixed,
    known magnitude bound.
    """

    def __init__(self, epsilon: float = 1.0, alpha: float = 1.0, h1: float = 1.0):
        if epsilon <= 0.0:
            raise ValueError(f"initial wealth epsilon must be positive, got {epsilon}")
        if alpha <= 0.0:
            raise ValueError(f"accumulator seed alpha must be positive, got {alpha}")
        if h1 <= 0.0:
            raise ValueError(f"initial hint must be positive, got {h1}")
        self.epsilon = float(epsilon)
        self.alpha = float(alpha)
        self.wealth = float(epsilon)
        self.v = 0.0
        self.A = 4.0 * self.alpha
        self.h = float(h1)
        self.t = 0
        self.trace = BettingTrace()

    @property
    def current_hint(self) -> float:
        return self.h

    def play(self) -> float:
        return self.v * self.wealth

    def update(self, g: float, h_next: Union[float, None] = None) -> None:
        g = float(g)
        h_next = self.h if h_next is None else float(h_next)
        if abs(g) > self.h:
            raise ValueError(
                f"gradient magnitude {abs(g)} exceeds the hint {self.h} in force"
            )
        if h_next < self.h:
            raise ValueError(f"hints must be nondecreasing, got {h_next} after {self.h}")
        w = self.v * self.wealth
        self.wealth -= g * w
        z = g / (1.0 - g * self.v)
        self.A += z * z
        tr = self.trace
        tr.vs.append(self.v)
        tr.gs.append(g)
        tr.zs.append(z)
        tr.hints.append(self.h)
        tr.bets.append(w)
        tr.wealths.append(self.wealth)
        cap = 0.5 / h_next
        v_new = self.v - ONS_STEP * z / self.A
        self.v = max(min(v_new, cap), -cap)
        self.h = h_next
        self.t += 1


def ons_inner_regret(trace: BettingTrace, v_ref: float) -> float:
    """Excess log-wealth loss of the wagered fractions over a fixed fraction.

    v_ref must keep every factor 1 - g * v_ref positive.
    """
    v_ref = float(v_ref)
    terms = []
    for g, v in zip(trace.gs, trace.vs):
        ref = 1.0 - g * v_ref
        if ref <= 0.0:
            raise ValueError(
                f"reference fraction {v_ref} leaves the betting domain (factor {ref})"
            )
        terms.append(math.log(ref) - math.log1p(-g * v))
    return math.fsum(terms)


def ons_regret_bound(alpha: float, h_final: float, sum_sq: float) -> float:
    """Closed-form cap on the inner Newton-step regret against any fixed
    fraction inside the final betting interval."""
    return alpha / (4.0 * h_final * h_final) + 4.5 * math.log1p(sum_sq / alpha)
