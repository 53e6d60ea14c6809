"""Adaptive gradient descent restricted to the Euclidean unit ball.

Serves as the direction learner in the dimension-free lifting; its regret
against any unit-norm comparator is at most 2^(3/2) * sqrt(sum of squared
gradient norms). The step scale sqrt(2) is the minimizer of 2/lam + lam,
so no tuning knob remains.
"""
from __future__ import annotations

import math

import numpy as np

from .core import Learner


def project_unit_ball(x: np.ndarray) -> np.ndarray:
    n = float(np.linalg.norm(x))
    if n <= 1.0:
        return x
    y = x / n
    m = float(np.linalg.norm(y))
    if m > 1.0:
        # rounding pushed the rescaled point just outside; shave it back
        y = y * (1.0 - 2.0 ** -50)
    return y


class AdaGradBall(Learner):
    def __init__(self, dim: int, lam: float = math.sqrt(2.0)):
        if dim < 1:
            raise ValueError(f"dimension must be >= 1, got {dim}")
        if lam <= 0.0:
            raise ValueError(f"step scale must be positive, got {lam}")
        self.dim = int(dim)
        self.lam = float(lam)
        self.w = np.zeros(self.dim)
        self.sum_sq = 0.0

    def play(self) -> np.ndarray:
        return self.w

    def update(self, g) -> None:
        g = np.atleast_1d(np.asarray(g, dtype=float))
        if g.shape != (self.dim,):
            raise ValueError(f"gradient shape {g.shape} does not match dimension {self.dim}")
        self.sum_sq += float(g @ g)
        if self.sum_sq > 0.0:
            eta = self.lam / math.sqrt(self.sum_sq)
            self.w = project_unit_ball(self.w - eta * g)


def ball_regret_bound(sum_sq: float) -> float:
    """Regret cap against any comparator inside the unit ball."""
    return 2.0 ** 1.5 * math.sqrt(sum_sq)
