"""Gradient-stream generators and brute-force oracles for tests.

All generated magnitudes are snapped down to the lattice of multiples of
2**-20 before the configured scale is applied. That makes streams exactly
scalable: multiplying the scale by any factor up to ~10^6 multiplies every
gradient exactly, with no rounding, and running magnitude sums stay exact
well past the horizons used in tests. Seeded kinds draw from PCG64; two
independent child streams (spawned from a SeedSequence over the seed) supply
magnitude/sign words and direction vectors, so traces are reproducible
bit-for-bit from (config, seed) alone.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .core import RegretLedger, Vector

KINDS = (
    "constant",
    "alternating",
    "growing",
    "spike",
    "seeded_uniform",
    "seeded_signs",
    "zero",
    "adaptive_sign",
)

_SEEDED = ("seeded_uniform", "seeded_signs")

_GRID = float(2 ** 20)


def quantize_magnitude(x: float) -> float:
    """Largest multiple of 2**-20 not exceeding x; x must be nonnegative."""
    return math.floor(x * _GRID) / _GRID


@dataclass(frozen=True)
class AdversaryConfig:
    kind: str
    scale: float = 1.0
    dim: int = 1
    seed: int = 0
    rate: float = 0.5        # growing: magnitude t**rate
    period: int = 10         # spike: every period-th round is a spike
    magnitude: float = 10.0  # spike: spike size, in units of scale
    envelope: float = 1.0    # seeded kinds: magnitude cap, in units of scale

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown adversary kind {self.kind!r}, expected one of {KINDS}")
        if self.scale <= 0.0:
            raise ValueError(f"scale must be positive, got {self.scale}")
        if self.dim < 1:
            raise ValueError(f"dimension must be >= 1, got {self.dim}")
        if self.period < 1:
            raise ValueError(f"spike period must be >= 1, got {self.period}")
        if self.magnitude <= 0.0:
            raise ValueError(f"spike magnitude must be positive, got {self.magnitude}")
        if self.envelope <= 0.0:
            raise ValueError(f"envelope must be positive, got {self.envelope}")
        if not math.isfinite(self.rate):
            raise ValueError(f"growth rate must be finite, got {self.rate}")


class StreamAdversary:
    """Stateful gradient source; next_grad may inspect the played point."""

    def __init__(self, config: AdversaryConfig):
        self.config = config
        if config.kind in _SEEDED:
            words, dirs = np.random.SeedSequence(config.seed).spawn(2)
            self._words = np.random.Generator(np.random.PCG64(words))
            self._dirs = np.random.Generator(np.random.PCG64(dirs))
            self._buf = np.empty(0, dtype=np.uint64)
            self._i = 0

    def bound(self) -> Union[float, None]:
        """A-priori cap on gradient norms, None when the stream is unbounded.

        Exceeds every generated norm exactly (not merely to rounding) in the
        one-dimensional game, so it is safe to hand out as a constant hint.
        """
        c = self.config
        if c.kind == "zero":
            return 0.0
        if c.kind == "growing":
            return None
        if c.kind == "spike":
            return c.scale * quantize_magnitude(max(1.0, c.magnitude))
        if c.kind in _SEEDED:
            return c.scale * quantize_magnitude(c.envelope)
        return c.scale * quantize_magnitude(1.0)

    def _next_word(self) -> int:
        if self._i >= len(self._buf):
            self._buf = self._words.integers(0, 2 ** 64, size=4096, dtype=np.uint64)
            self._i = 0
        u = int(self._buf[self._i])
        self._i += 1
        return u

    def _direction(self) -> np.ndarray:
        d = self.config.dim
        x = self._dirs.standard_normal(d)
        n = float(np.linalg.norm(x))
        if n == 0.0:
            x = np.zeros(d)
            x[0] = 1.0
            return x
        u = x / n
        if float(np.linalg.norm(u)) > 1.0:
            u = u * (1.0 - 2.0 ** -50)
        return u

    def next_grad(self, t: int, w: Vector) -> Vector:
        """Gradient for round t (1-based); w is the point just played."""
        c = self.config
        kind = c.kind
        if kind == "zero":
            return np.zeros(c.dim) if c.dim > 1 else 0.0
        direction = None
        if kind == "constant":
            value = c.scale * 1.0
        elif kind == "alternating":
            value = c.scale if t % 2 == 0 else -c.scale
        elif kind == "growing":
            value = c.scale * quantize_magnitude(float(t) ** c.rate)
        elif kind == "spike":
            raw = c.magnitude if t % c.period == 0 else 1.0
            value = c.scale * quantize_magnitude(raw)
        elif kind == "adaptive_sign":
            lead = float(w[0]) if isinstance(w, np.ndarray) else float(w)
            sign = 1.0 if lead >= 0.0 else -1.0
            value = sign * (c.scale * 1.0)
        else:
            u = self._next_word()
            sign = 1.0 if u & 1 else -1.0
            if kind == "seeded_uniform":
                frac = (u >> 11) * 2.0 ** -53
                mag = quantize_magnitude(frac * c.envelope)
            else:
                mag = quantize_magnitude(c.envelope)
            value = sign * (c.scale * mag)
            if c.dim > 1:
                direction = self._direction()
        if c.dim == 1:
            return value
        if direction is None:
            g = np.zeros(c.dim)
            g[0] = value
            return g
        return value * direction


def best_betting_fraction(gs, h_final: float, resolution: float = 1e-4) -> float:
    """Exhaustive-grid minimizer of the betting loss sum(-ln(1 - g*v)).

    Searches v over [-1/(2 h_final), 1/(2 h_final)] at the given step;
    ties break toward the smallest |v|. Requires max|g| <= h_final so the
    whole grid stays inside the loss domain.
    """
    if h_final <= 0.0:
        raise ValueError(f"final hint must be positive, got {h_final}")
    if resolution <= 0.0:
        raise ValueError(f"resolution must be positive, got {resolution}")
    gs = np.asarray(list(gs), dtype=float)
    if gs.size == 0:
        return 0.0
    cap = 0.5 / h_final
    if float(np.max(np.abs(gs))) > h_final:
        raise ValueError("stream does not respect the final hint")
    n = int(math.ceil(2.0 * cap / resolution)) + 1
    if n % 2 == 0:
        n += 1
    grid = np.linspace(-cap, cap, n)
    grid[n // 2] = 0.0
    vals, counts = np.unique(gs, return_counts=True)
    weights = counts.astype(float)
    losses = np.empty(n)
    chunk = max(1, int(4_000_000 // max(1, vals.size)))
    for lo in range(0, n, chunk):
        block = grid[lo:lo + chunk]
        losses[lo:lo + block.size] = -np.log1p(-np.outer(block, vals)) @ weights
    best = losses.min()
    ties = np.flatnonzero(losses == best)
    return float(grid[ties[np.argmin(np.abs(grid[ties]))]])


def comparator_sweep(ledger: RegretLedger, seed: int = 0, n_random: int = 4) -> list:
    """Standard comparator set for bound reports.

    One-dimensional games get the fixed scalars 0, +/-0.1, +/-1, +/-10,
    +/-100. Higher dimensions get the zero vector plus those magnitudes
    along +/- the normalized gradient sum (first axis when the sum is zero)
    and along n_random seeded random unit directions per magnitude.
    """
    magnitudes = (0.1, 1.0, 10.0, 100.0)
    d = ledger.dim
    if d is None or d == 1:
        out = [0.0]
        for m in magnitudes:
            out.extend((m, -m))
        return out
    gsum = np.asarray(ledger.grad_sum, dtype=float)
    norm = float(np.linalg.norm(gsum))
    if norm > 0.0:
        lead = gsum / norm
    else:
        lead = np.zeros(d)
        lead[0] = 1.0
    gen = np.random.Generator(np.random.PCG64(seed))
    dirs = []
    for _ in range(n_random):
        x = gen.standard_normal(d)
        n = float(np.linalg.norm(x))
        if n == 0.0:
            x = np.zeros(d)
            x[0] = 1.0
            n = 1.0
        dirs.append(x / n)
    out = [np.zeros(d)]
    for m in magnitudes:
        out.append(m * lead)
        out.append(-m * lead)
        for u in dirs:
            out.append(m * u)
    return out
