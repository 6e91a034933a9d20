import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from slugfest.predict import (
    horizon_for_prob,
    predict,
    prob_within,
    prob_within_given_elapsed,
)

LAM = 0.001408975  # fitted rate for the modern-era gap series


def test_prob_within_reference_values():
    assert prob_within(LAM, 1425) == pytest.approx(0.866, abs=1e-3)
    assert prob_within(LAM, 300) == pytest.approx(0.345, abs=1e-3)
    assert prob_within(LAM, 600) == pytest.approx(0.571, abs=1e-3)


def test_prob_within_edge_cases():
    assert prob_within(LAM, 0.0) == 0.0
    with pytest.raises(ValueError):
        prob_within(LAM, -1.0)
    with pytest.raises(ValueError):
        prob_within(0.0, 10.0)


def test_prob_within_long_rate_anchors():
    # 1/760.8 per-game rate: a 45-game window is a long shot, a whole
    # 2430-game slate is close to a lock
    assert prob_within(1 / 760.8, 45) == pytest.approx(0.0574, abs=5e-4)
    assert prob_within(1 / 760.8, 45) < 0.10
    assert prob_within(1 / 760.8, 2430) > 0.90


def test_horizon_for_prob_anchor():
    # -ln(0.2) / 0.001314444 game gap for an 80% chance
    h = horizon_for_prob(0.001314444, 0.8)
    assert h == pytest.approx(1224, rel=0.05)


def test_memorylessness_exact():
    """Elapsed wait drops out of the conditional probability entirely."""
    for elapsed in (0.0, 1.0, 99.0, 1e4):
        for h in (1.0, 300.0, 2430.0):
            assert prob_within_given_elapsed(LAM, elapsed, h) == prob_within(LAM, h)


@settings(max_examples=80, deadline=None)
@given(
    st.floats(min_value=1e-6, max_value=1.0),
    st.floats(min_value=0.0, max_value=1e6),
    st.floats(min_value=1e-3, max_value=1e6),
)
def test_memorylessness_property(rate, elapsed, horizon):
    assert prob_within_given_elapsed(rate, elapsed, horizon) == prob_within(
        rate, horizon
    )


def test_horizon_round_trip():
    for target in (0.01, 0.5, 0.95):
        h = horizon_for_prob(LAM, target)
        assert prob_within(LAM, h) == pytest.approx(target, rel=1e-12)


def test_horizon_validates_target():
    assert horizon_for_prob(LAM, 0.0) == 0.0  # degenerate but well-defined
    with pytest.raises(ValueError):
        horizon_for_prob(LAM, 1.0)
    with pytest.raises(ValueError):
        horizon_for_prob(LAM, -0.2)


def test_predict_bundles_inputs():
    p = predict(LAM, 600, elapsed=250)
    assert p.rate == LAM
    assert p.horizon == 600
    assert p.games_elapsed == 250
    assert p.probability == prob_within(LAM, 600)
