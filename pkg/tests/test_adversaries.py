"""Stream generators, their promises, and the brute-force betting oracle."""
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from leashed import (
    KINDS,
    AdversaryConfig,
    RegretLedger,
    RoundRecord,
    StreamAdversary,
    best_betting_fraction,
    comparator_sweep,
    dual_norm,
    quantize_magnitude,
)


def stream(config, T, w=0.0):
    adv = StreamAdversary(config)
    return [adv.next_grad(t, w) for t in range(1, T + 1)]


def test_config_validation():
    with pytest.raises(ValueError):
        AdversaryConfig("bogus")
    with pytest.raises(ValueError):
        AdversaryConfig("constant", scale=0.0)
    with pytest.raises(ValueError):
        AdversaryConfig("constant", dim=0)
    with pytest.raises(ValueError):
        AdversaryConfig("spike", period=0)
    with pytest.raises(ValueError):
        AdversaryConfig("spike", magnitude=0.0)
    with pytest.raises(ValueError):
        AdversaryConfig("seeded_uniform", envelope=0.0)
    with pytest.raises(ValueError):
        AdversaryConfig("growing", rate=math.inf)


def test_quantize_pins():
    assert quantize_magnitude(0.0) == 0.0
    assert quantize_magnitude(1.0) == 1.0
    assert quantize_magnitude(10.0) == 10.0
    assert quantize_magnitude(2.0 ** -20) == 2.0 ** -20


@given(st.floats(min_value=0.0, max_value=1e7))
def test_quantize_snaps_down_to_lattice(x):
    q = quantize_magnitude(x)
    assert q <= x
    assert x - q < 2.0 ** -20
    assert q * 2.0 ** 20 == math.floor(q * 2.0 ** 20)


def test_deterministic_kind_pins():
    assert stream(AdversaryConfig("constant"), 3) == [1.0, 1.0, 1.0]
    assert stream(AdversaryConfig("alternating"), 4) == [-1.0, 1.0, -1.0, 1.0]
    g = StreamAdversary(AdversaryConfig("growing"))
    assert g.next_grad(1, 0.0) == 1.0
    assert g.next_grad(4, 0.0) == 2.0  # 4 ** 0.5 is exact on the lattice
    sp = StreamAdversary(AdversaryConfig("spike", period=10, magnitude=10.0))
    assert sp.next_grad(9, 0.0) == 1.0
    assert sp.next_grad(10, 0.0) == 10.0
    assert stream(AdversaryConfig("zero"), 2) == [0.0, 0.0]


def test_adaptive_sign_follows_play():
    adv = StreamAdversary(AdversaryConfig("adaptive_sign"))
    assert adv.next_grad(1, 0.0) == 1.0   # sign of zero counts as positive
    assert adv.next_grad(2, -3.0) == -1.0
    assert adv.next_grad(3, 0.25) == 1.0
    d2 = StreamAdversary(AdversaryConfig("adaptive_sign", dim=2))
    g = d2.next_grad(1, np.array([-1.0, 5.0]))  # leads with the first component
    assert np.array_equal(g, np.array([-1.0, 0.0]))


def test_scale_applies_to_everything():
    assert stream(AdversaryConfig("constant", scale=3.0), 2) == [3.0, 3.0]
    assert stream(AdversaryConfig("alternating", scale=2.0), 2) == [-2.0, 2.0]
    sp = StreamAdversary(AdversaryConfig("spike", scale=2.0))
    assert sp.next_grad(10, 0.0) == 20.0


@pytest.mark.parametrize("kind", KINDS)
def test_bound_dominates_stream_exactly(kind, T=2000):
    cfg = AdversaryConfig(kind, seed=3)
    adv = StreamAdversary(cfg)
    cap = adv.bound()
    if kind == "growing":
        assert cap is None
        return
    if kind == "zero":
        assert cap == 0.0
    for t in range(1, T + 1):
        g = adv.next_grad(t, 0.0)
        assert abs(g) <= cap


@pytest.mark.parametrize("kind", ("seeded_uniform", "seeded_signs"))
def test_bound_dominates_vector_norms(kind):
    adv = StreamAdversary(AdversaryConfig(kind, dim=5, seed=9))
    cap = adv.bound()
    for t in range(1, 3000):
        assert dual_norm(adv.next_grad(t, np.zeros(5))) <= cap


@pytest.mark.parametrize("kind", ("seeded_uniform", "seeded_signs"))
def test_seeded_streams_reproducible(kind):
    a = stream(AdversaryConfig(kind, seed=11), 500)
    b = stream(AdversaryConfig(kind, seed=11), 500)
    assert a == b
    c = stream(AdversaryConfig(kind, seed=12), 500)
    assert a != c
    # vector streams too, bit for bit
    va = stream(AdversaryConfig(kind, dim=4, seed=11), 200, w=np.zeros(4))
    vb = stream(AdversaryConfig(kind, dim=4, seed=11), 200, w=np.zeros(4))
    assert all(np.array_equal(x, y) for x, y in zip(va, vb))


def test_seeded_uniform_spans_the_envelope():
    gs = stream(AdversaryConfig("seeded_uniform", envelope=2.0, seed=1), 2000)
    mags = [abs(g) for g in gs]
    assert max(mags) <= 2.0
    assert max(mags) > 1.5 and min(mags) < 0.5  # spread, not stuck at one value
    assert any(g < 0.0 for g in gs) and any(g > 0.0 for g in gs)


def test_seeded_signs_is_constant_magnitude():
    gs = stream(AdversaryConfig("seeded_signs", seed=4), 300)
    assert set(abs(g) for g in gs) == {1.0}
    assert any(g < 0.0 for g in gs) and any(g > 0.0 for g in gs)


@pytest.mark.parametrize("kind", [k for k in KINDS if k != "zero"])
def test_thousandfold_scaling_is_exact(kind):
    gs = stream(AdversaryConfig(kind, seed=2), 400)
    for g in gs:
        assert Fraction(1000.0 * g) == 1000 * Fraction(g)


def test_vector_deterministic_kinds_use_first_axis():
    g = StreamAdversary(AdversaryConfig("constant", dim=3)).next_grad(1, np.zeros(3))
    assert np.array_equal(g, np.array([1.0, 0.0, 0.0]))


def test_vector_seeded_norm_matches_scalar_magnitude():
    cfg = AdversaryConfig("seeded_uniform", dim=6, seed=5)
    adv = StreamAdversary(cfg)
    for t in range(1, 200):
        g = adv.next_grad(t, np.zeros(6))
        assert g.shape == (6,)
        assert dual_norm(g) <= adv.bound()


def test_best_fraction_pins():
    assert best_betting_fraction([1.0], 1.0) == -0.5
    assert best_betting_fraction([1.0, -1.0], 1.0) == 0.0
    assert best_betting_fraction([0.0, 0.0], 1.0) == 0.0
    assert best_betting_fraction([], 1.0) == 0.0


def test_best_fraction_finds_interior_optimum():
    # two wins and a loss: the exact minimizer of the betting loss is -1/3
    v = best_betting_fraction([1.0, 1.0, -1.0], 1.0, resolution=1e-4)
    assert v == pytest.approx(-1.0 / 3.0, abs=1e-4)


def test_best_fraction_validation():
    with pytest.raises(ValueError):
        best_betting_fraction([2.0], 1.0)  # stream violates the hint
    with pytest.raises(ValueError):
        best_betting_fraction([1.0], 0.0)
    with pytest.raises(ValueError):
        best_betting_fraction([1.0], 1.0, resolution=0.0)


@given(st.lists(st.floats(min_value=-1.0, max_value=1.0), min_size=1, max_size=30))
@settings(deadline=None, max_examples=30)
def test_best_fraction_beats_zero_and_stays_in_domain(gs):
    v = best_betting_fraction(gs, 1.0, resolution=1e-3)
    assert abs(v) <= 0.5
    loss_v = -math.fsum(math.log1p(-g * v) for g in gs)
    assert loss_v <= 0.0 + 1e-12  # never worse than not betting


def scalar_ledger(plays_and_grads):
    ledger = RegretLedger()
    for t, (w, g) in enumerate(plays_and_grads, start=1):
        ledger.append(RoundRecord(t, w, g, 0.0))
    return ledger


def test_comparator_sweep_scalar():
    ledger = scalar_ledger([(0.0, 1.0)])
    out = comparator_sweep(ledger)
    assert out == [0.0, 0.1, -0.1, 1.0, -1.0, 10.0, -10.0, 100.0, -100.0]
    assert comparator_sweep(RegretLedger()) == out  # empty ledger counts as scalar


def test_comparator_sweep_vector():
    ledger = RegretLedger()
    ledger.append(RoundRecord(1, np.zeros(3), np.array([2.0, 0.0, 0.0]), 0.0))
    out = comparator_sweep(ledger, seed=0, n_random=4)
    assert len(out) == 1 + 4 * 6
    assert np.array_equal(out[0], np.zeros(3))
    # two aligned comparators per magnitude point along the gradient sum
    assert np.allclose(out[1], [0.1, 0.0, 0.0])
    assert np.allclose(out[2], [-0.1, 0.0, 0.0])
    for w in out[1:]:
        # every nonzero comparator sits at one of the standard magnitudes
        assert min(abs(dual_norm(w) - m) for m in (0.1, 1.0, 10.0, 100.0)) < 1e-9
    again = comparator_sweep(ledger, seed=0, n_random=4)
    assert all(np.array_equal(x, y) for x, y in zip(out, again))
