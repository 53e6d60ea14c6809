"""Game loop and ledger accounting."""
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from leashed import (
    GameDivergence,
    Learner,
    RegretLedger,
    RoundRecord,
    dual_norm,
    run_game,
)

finite_floats = st.floats(
    min_value=-1e6, max_value=1e6, allow_nan=False, allow_infinity=False
)


class FixedPlayer(Learner):
    """Plays a scripted sequence of points and ignores gradients."""

    def __init__(self, points):
        self.points = list(points)
        self.i = 0

    def play(self):
        w = self.points[self.i]
        self.i += 1
        return w

    def update(self, g):
        pass


class ListAdversary:
    def __init__(self, grads):
        self.grads = list(grads)

    def next_grad(self, t, w):
        return self.grads[t - 1]


def test_dual_norm():
    assert dual_norm(-3.0) == 3.0
    assert dual_norm(np.array([3.0, 4.0])) == 5.0


def test_empty_ledger_regret_zero():
    ledger = RegretLedger()
    assert ledger.regret(0.0) == 0.0
    assert ledger.regret(123.0) == 0.0
    assert ledger.dim is None


def test_pinned_two_round_regret():
    ledger = RegretLedger()
    ledger.append(RoundRecord(1, 2.0, 1.0, 0.0))
    ledger.append(RoundRecord(2, -1.0, 1.0, 0.0))
    assert ledger.cum_loss == 1.0
    assert ledger.grad_sum == 2.0
    assert ledger.regret(0.0) == 1.0
    assert ledger.regret(3.0) == -5.0


def test_comparator_dimension_checked():
    ledger = RegretLedger()
    ledger.append(RoundRecord(1, np.array([1.0, 0.0]), np.array([1.0, 1.0]), 0.0))
    with pytest.raises(ValueError):
        ledger.regret(np.array([1.0, 0.0, 0.0]))
    scalar = RegretLedger()
    scalar.append(RoundRecord(1, 1.0, 1.0, 0.0))
    with pytest.raises(ValueError):
        scalar.regret(np.array([1.0, 2.0]))
    # a size-1 array comparator is accepted in the scalar game
    assert scalar.regret(np.array([2.0])) == scalar.regret(2.0)


def test_vector_ledger_statistics():
    ledger = RegretLedger()
    ledger.append(RoundRecord(1, np.array([1.0, 0.0]), np.array([3.0, 4.0]), 0.0))
    ledger.append(RoundRecord(2, np.array([0.0, 2.0]), np.array([0.0, -4.0]), 0.0))
    assert ledger.dim == 2
    assert ledger.max_norm == 5.0
    assert ledger.max_played_norm == 2.0
    assert ledger.sum_sq == 41.0
    assert np.array_equal(ledger.grad_sum, np.array([3.0, 0.0]))
    assert ledger.regret(np.zeros(2)) == ledger.cum_loss


@given(st.lists(st.tuples(finite_floats, finite_floats), max_size=60),
       finite_floats, finite_floats)
def test_regret_affine_in_comparator(rounds, u, v):
    ledger = RegretLedger()
    for t, (w, g) in enumerate(rounds, start=1):
        ledger.append(RoundRecord(t, w, g, 0.0))
    mid = ledger.regret(0.5 * (u + v))
    avg = 0.5 * (ledger.regret(u) + ledger.regret(v))
    assert mid == pytest.approx(avg, rel=1e-9, abs=1e-6)


@given(st.lists(st.tuples(finite_floats, finite_floats), min_size=1, max_size=60))
@settings(deadline=None)
def test_recompute_matches_incremental(rounds):
    ledger = RegretLedger()
    for t, (w, g) in enumerate(rounds, start=1):
        ledger.append(RoundRecord(t, w, g, 0.0))
    exact = ledger.recompute()
    assert ledger.max_norm == exact["max_norm"]
    assert ledger.max_played_norm == exact["max_played_norm"]
    for inc, ex in (
        (ledger.cum_loss, exact["cum_loss"]),
        (ledger.grad_sum, exact["grad_sum"]),
        (ledger.sum_norm, exact["sum_norm"]),
        (ledger.sum_sq, exact["sum_sq"]),
    ):
        assert inc == pytest.approx(ex, rel=1e-12, abs=1e-12)


def test_run_game_records_protocol():
    player = FixedPlayer([1.0, -2.0, 0.5])
    ledger = run_game(player, ListAdversary([1.0, 0.0, -1.0]), 3)
    assert len(ledger) == 3
    assert [r.t for r in ledger.rounds] == [1, 2, 3]
    assert [r.played for r in ledger.rounds] == [1.0, -2.0, 0.5]
    assert [r.grad for r in ledger.rounds] == [1.0, 0.0, -1.0]
    # FixedPlayer exposes no hint, recorded as 0
    assert [r.hint_before for r in ledger.rounds] == [0.0, 0.0, 0.0]
    assert ledger.cum_loss == 0.5


def test_run_game_validates_horizon():
    with pytest.raises(ValueError):
        run_game(FixedPlayer([0.0]), ListAdversary([0.0]), 0)


def test_run_game_aborts_on_nonfinite_point():
    player = FixedPlayer([0.0, 0.0, math.nan, 0.0])
    with pytest.raises(GameDivergence, match="round 3"):
        run_game(player, ListAdversary([0.0] * 4), 4)


def test_run_game_aborts_on_nonfinite_gradient():
    with pytest.raises(GameDivergence, match="round 2"):
        run_game(FixedPlayer([0.0] * 3), ListAdversary([0.0, math.inf, 0.0]), 3)


def test_run_game_allows_nonfinite_when_unchecked():
    ledger = run_game(
        FixedPlayer([1.0, 1.0]), ListAdversary([math.inf, 1.0]), 2, check_finite=False
    )
    assert ledger.cum_loss == math.inf


def test_run_game_coerces_size_one_gradient():
    ledger = run_game(FixedPlayer([1.0]), ListAdversary([np.array([2.0])]), 1)
    assert isinstance(ledger.rounds[0].grad, float)
    assert ledger.rounds[0].grad == 2.0


def test_run_game_rejects_dimension_mismatch():
    with pytest.raises(ValueError):
        run_game(FixedPlayer([np.zeros(3)]), ListAdversary([np.zeros(2)]), 1)
    with pytest.raises(ValueError):
        run_game(FixedPlayer([np.zeros(3)]), ListAdversary([1.0]), 1)
    with pytest.raises(ValueError):
        run_game(FixedPlayer([0.0]), ListAdversary([np.zeros(2)]), 1)


def test_run_game_snapshots_points():
    # the ledger must keep copies, not references the learner mutates later
    w = np.array([1.0, 1.0])

    class Mutator(Learner):
        def play(self):
            return w

        def update(self, g):
            w[0] += 100.0

    ledger = run_game(Mutator(), ListAdversary([np.zeros(2), np.zeros(2)]), 2)
    assert ledger.rounds[0].played[0] == 1.0
    assert ledger.rounds[1].played[0] == 101.0
