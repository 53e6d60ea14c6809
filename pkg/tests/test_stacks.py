"""Named stack assembly and guarantee dispatch."""
import numpy as np
import pytest

from leashed import (
    ALGOS,
    AdaGradBall,
    BoundParams,
    CoinBettor,
    DimFreeLift,
    Leashed,
    StreamStats,
    Truncation,
    ball_regret_bound,
    bettor_bound,
    build_learner,
    fixed_diameter_bound,
    full_stack_bound,
    hintless_bound,
    stack_bound,
)

PARAMS = BoundParams(epsilon=2.0, alpha=3.0, k=0.5, p=1.0, g0=4.0)
STATS = StreamStats.from_norms([1.0, 2.0, 1.0], g0=4.0)


def test_algos_roster():
    assert ALGOS == (
        "ons_hints", "hintless", "leashed", "leashed_dimfree",
        "fixed_diameter", "adagrad_ball",
    )


def test_build_learner_types_and_wiring():
    bettor = build_learner("ons_hints", PARAMS)
    assert isinstance(bettor, CoinBettor)
    assert (bettor.epsilon, bettor.A, bettor.h) == (2.0, 12.0, 4.0)
    assert build_learner("ons_hints", PARAMS, hint=9.0).h == 9.0

    trunc = build_learner("hintless", PARAMS)
    assert isinstance(trunc, Truncation) and trunc.h == 4.0

    leash = build_learner("leashed", PARAMS)
    assert isinstance(leash, Leashed)
    assert (leash.k, leash.p, leash.h) == (0.5, 1.0, 4.0)
    assert leash.fixed_barrier is None

    lift = build_learner("leashed_dimfree", PARAMS, dim=3)
    assert isinstance(lift, DimFreeLift) and lift.dim == 3
    assert isinstance(lift.one_d, Leashed) and isinstance(lift.ball, AdaGradBall)

    fd = build_learner("fixed_diameter", PARAMS, diameter=2.5)
    assert isinstance(fd, Leashed) and fd.fixed_barrier == 2.5

    ball = build_learner("adagrad_ball", PARAMS, dim=7)
    assert isinstance(ball, AdaGradBall) and ball.dim == 7


def test_build_learner_validation():
    with pytest.raises(ValueError):
        build_learner("bogus", PARAMS)
    with pytest.raises(ValueError):
        build_learner("leashed", PARAMS, dim=2)  # scalar stacks refuse dim > 1
    with pytest.raises(ValueError):
        build_learner("fixed_diameter", PARAMS)  # needs a diameter
    with pytest.raises(ValueError):
        build_learner("leashed", PARAMS, dim=0)


def test_stack_bound_dispatch():
    w = 2.0
    assert stack_bound("ons_hints", PARAMS, STATS, w) == \
        bettor_bound(PARAMS, STATS, w)
    assert stack_bound("hintless", PARAMS, STATS, w, max_played=3.0) == \
        hintless_bound(PARAMS, STATS, w, 3.0)
    assert stack_bound("leashed", PARAMS, STATS, w) == \
        full_stack_bound(PARAMS, STATS, w)
    assert stack_bound("leashed_dimfree", PARAMS, STATS, w) == \
        full_stack_bound(PARAMS, STATS, w) + w * ball_regret_bound(STATS.sum_sq)
    assert stack_bound("fixed_diameter", PARAMS, STATS, w, diameter=1.0) == \
        fixed_diameter_bound(PARAMS, STATS, w, 1.0)
    assert stack_bound("adagrad_ball", PARAMS, STATS, w) == \
        ball_regret_bound(STATS.sum_sq)


def test_stack_bound_missing_arguments():
    with pytest.raises(ValueError):
        stack_bound("hintless", PARAMS, STATS, 1.0)
    with pytest.raises(ValueError):
        stack_bound("fixed_diameter", PARAMS, STATS, 1.0)
    with pytest.raises(ValueError):
        stack_bound("bogus", PARAMS, STATS, 1.0)


def test_built_stacks_play_one_round():
    # every stack completes a play/update cycle in its natural dimension
    grads = {1: 1.0, 3: np.array([1.0, 0.0, 0.0])}
    for algo in ALGOS:
        dim = 3 if algo in ("leashed_dimfree", "adagrad_ball") else 1
        learner = build_learner(algo, PARAMS, dim=dim, diameter=1.0)
        learner.play()
        learner.update(grads[dim])
