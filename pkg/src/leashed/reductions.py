"""Wrappers that remove input knowledge requirements from a scalar learner.

Three reductions compose around a hint-consuming learner such as CoinBettor:

* Truncation fabricates hints from past gradient magnitudes; gradients that
  overshoot the current hint are clipped back to it, and the damage of the
  clipped mass telescopes to at most one final-magnitude term.
* Leashed additionally confines the played points inside a data-driven
  barrier that grows with the observed gradient mass, feeding the inner
  learner subgradients of a hinged surrogate loss instead of raw gradients.
  With a constant barrier it degrades gracefully into a fixed-diameter
  constrained learner.
* DimFreeLift runs a scalar stack for the magnitude and a unit-ball learner
  for the direction, playing their product in d dimensions.
"""
from __future__ import annotations

import math
from typing import Union

import numpy as np

from .core import HintedLearner, Learner, Vector, dual_norm


def truncate(g: Vector, h: float) -> Vector:
    """Clip the gradient back to norm h when it meets or exceeds h."""
    n = dual_norm(g)
    if n < h:
        return g
    if isinstance(g, np.ndarray):
        return g * (h / n)
    return math.copysign(h, g)


def leash_project(w: float, barrier: float) -> float:
    """Nearest point of [-barrier, barrier]."""
    if abs(w) < barrier:
        return w
    if w == 0.0:
        return 0.0
    return math.copysign(barrier, w)


def surrogate_loss(g_trunc: float, w: float, barrier: float) -> float:
    return 0.5 * (g_trunc * w + abs(g_trunc) * max(0.0, abs(w) - barrier))


def surrogate_grad(g_trunc: float, w: float, barrier: float) -> float:
    """Subgradient of the hinged surrogate at the unprojected point w.

    At the kink |w| == barrier the inactive side is taken, and sign(0) = 0,
    so the magnitude never exceeds |g_trunc|.
    """
    hinge = 0.0
    if abs(w) > barrier:
        hinge = math.copysign(abs(g_trunc), w)
    return 0.5 * (g_trunc + hinge)


class Truncation(Learner):
    """Hint fabrication for a scalar or vector game.

    Starts from an a-priori magnitude guess g0 and maintains
    h_{t+1} = max(h_t, |g_t|); the inner learner always receives gradients
    respecting the hint it was promised.
    """

    def __init__(self, inner: HintedLearner, g0: float = 1.0):
        if g0 <= 0.0:
            raise ValueError(f"initial magnitude guess must be positive, got {g0}")
        if inner.current_hint != g0:
            raise ValueError("inner learner must start with its hint equal to g0")
        self.inner = inner
        self.h = float(g0)
        self.delivered: list = []   # gradient actually sent inward each round
        self.hints_used: list[float] = []  # hint in force at delivery time

    @property
    def current_hint(self) -> float:
        return self.h

    @property
    def wealth(self) -> Union[float, None]:
        return getattr(self.inner, "wealth", None)

    def play(self) -> Vector:
        return self.inner.play()

    def update(self, g: Vector) -> None:
        n = dual_norm(g)
        g_in = truncate(g, self.h)
        h_new = max(self.h, n)
        self.delivered.append(g_in)
        self.hints_used.append(self.h)
        self.inner.update(g_in, h_new)
        self.h = h_new


class Leashed(Learner):
    """Barrier-constrained scalar learner with fabricated hints.

    The inner learner runs unconstrained; its proposals are projected onto
    [-B_t, B_t] before being played. The barrier after t rounds is
    B_{t+1} = k * (sum_{i<=t} |g_i| / G_t)^p with G_t the running maximum
    magnitude (B stays 0 until a nonzero gradient arrives). The inner
    learner is charged the subgradient of a hinged surrogate evaluated at
    its unprojected proposal, which vanishes once the proposal strays
    outside the barrier, so runaway wealth is impossible. Raw gradients are
    truncated to the fabricated hint exactly as in Truncation.

    A fixed_barrier pins B_t to a constant diameter instead and disables
    barrier growth.
    """

    def __init__(
        self,
        inner: HintedLearner,
        k: float = 1.0,
        p: float = 0.5,
        g0: float = 1.0,
        fixed_barrier: Union[float, None] = None,
    ):
        if k <= 0.0:
            raise ValueError(f"barrier scale k must be positive, got {k}")
        if not 0.0 < p <= 1.0:
            raise ValueError(f"barrier exponent p must lie in (0, 1], got {p}")
        if g0 <= 0.0:
            raise ValueError(f"initial magnitude guess must be positive, got {g0}")
        if fixed_barrier is not None and fixed_barrier <= 0.0:
            raise ValueError(f"fixed barrier must be positive, got {fixed_barrier}")
        if inner.current_hint != g0:
            raise ValueError("inner learner must start with its hint equal to g0")
        self.inner = inner
        self.k = float(k)
        self.p = float(p)
        self.h = float(g0)
        self.fixed_barrier = fixed_barrier
        self.B = float(fixed_barrier) if fixed_barrier is not None else 0.0
        self.G = 0.0
        self.sum_abs = 0.0
        self.max_ratio = 0.0
        self._pending: Union[float, None] = None

    @property
    def current_hint(self) -> float:
        return self.h

    @property
    def barrier(self) -> float:
        return self.B

    @property
    def wealth(self) -> Union[float, None]:
        return getattr(self.inner, "wealth", None)

    def play(self) -> float:
        w = float(self.inner.play())
        self._pending = w
        return leash_project(w, self.B)

    def update(self, g: float) -> None:
        if self._pending is None:
            raise RuntimeError("update called before play")
        w_inner = self._pending
        self._pending = None
        g = float(g)
        a = abs(g)
        old_h = self.h
        self.G = max(self.G, a)
        self.sum_abs += a
        self.h = max(self.h, a)
        if self.fixed_barrier is None and self.G > 0.0:
            ratio = self.sum_abs / self.G
            if ratio > self.max_ratio:
                self.max_ratio = ratio
            next_b = self.k * ratio ** self.p
        else:
            next_b = self.B
        g_in = truncate(g, old_h)
        g_sur = surrogate_grad(g_in, w_inner, self.B)
        self.inner.update(g_sur, self.h)
        self.B = next_b


def fixed_diameter(inner: HintedLearner, diameter: float, g0: float = 1.0) -> Leashed:
    """Truncation plus a constant barrier: plays never leave [-D, D]."""
    return Leashed(inner, g0=g0, fixed_barrier=diameter)


class DimFreeLift(Learner):
    """d-dimensional learner from a scalar stack and a unit-ball learner.

    Plays w_t = x_t * y_t where x_t comes from the scalar learner and y_t
    from the ball learner; the ball sees the raw gradient, the scalar
    learner sees the projected loss <g_t, y_t>. Keeps a per-round trace of
    (x_t, y_t, s_t) so the exact regret decomposition can be audited.
    """

    def __init__(self, scalar_learner: Learner, ball_learner: Learner, dim: int):
        if dim < 1:
            raise ValueError(f"dimension must be >= 1, got {dim}")
        self.one_d = scalar_learner
        self.ball = ball_learner
        self.dim = int(dim)
        self.xs: list[float] = []
        self.ys: list[np.ndarray] = []
        self.ss: list[float] = []
        self._y: Union[np.ndarray, None] = None

    @property
    def current_hint(self) -> Union[float, None]:
        return self.one_d.current_hint

    @property
    def barrier(self) -> Union[float, None]:
        return getattr(self.one_d, "barrier", None)

    @property
    def wealth(self) -> Union[float, None]:
        return getattr(self.one_d, "wealth", None)

    def play(self) -> np.ndarray:
        x = float(self.one_d.play())
        y = np.asarray(self.ball.play(), dtype=float)
        self._y = y.copy()
        self.xs.append(x)
        self.ys.append(self._y)
        return x * y

    def update(self, g) -> None:
        if self._y is None:
            raise RuntimeError("update called before play")
        g = np.atleast_1d(np.asarray(g, dtype=float))
        if g.shape != (self.dim,):
            raise ValueError(f"gradient shape {g.shape} does not match dimension {self.dim}")
        y = self._y
        self._y = None
        self.ball.update(g)
        s = float(g @ y)
        self.ss.append(s)
        self.one_d.update(s)
