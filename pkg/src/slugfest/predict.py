"""Forward-looking event probabilities under a fitted rate.

Everything here is a direct consequence of the exponential law: the
probability of at least one event within a horizon is 1 - exp(-rate*h),
and — memorylessness — the games already waited change nothing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .validation import check_non_negative, check_probability, check_rate

__all__ = [
    "Prediction",
    "prob_within",
    "prob_within_given_elapsed",
    "horizon_for_prob",
]


@dataclass(frozen=True)
class Prediction:
    """A rate, a horizon, and the implied occurrence probability."""

    rate: float
    games_elapsed: float
    horizon: float
    probability: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.probability <= 1.0:
            raise ValueError("probability must be in [0, 1]")


def prob_within(rate: float, horizon: float) -> float:
    """P(next event within ``horizon`` games) = 1 - exp(-rate*horizon)."""
    rate = check_rate(rate)
    horizon = check_non_negative(horizon, "horizon")
    return -math.expm1(-rate * horizon)


def prob_within_given_elapsed(rate: float, elapsed: float, horizon: float) -> float:
    """Same probability regardless of the wait so far (memorylessness).

    The identity P(T <= s+t | T > s) = P(T <= t) is exact for the
    exponential; the explicit argument exists to make that visible.
    """
    check_non_negative(elapsed, "elapsed")
    return prob_within(rate, horizon)


def horizon_for_prob(rate: float, target: float) -> float:
    """Smallest horizon h with prob_within(rate, h) >= target."""
    rate = check_rate(rate)
    target = check_probability(target, "target")
    return -math.log1p(-target) / rate


def predict(rate: float, horizon: float, elapsed: float = 0.0) -> Prediction:
    """Bundle a prediction as a value object (CLI/report plumbing)."""
    p = prob_within_given_elapsed(rate, elapsed, horizon)
    return Prediction(
        rate=check_rate(rate),
        games_elapsed=check_non_negative(elapsed, "elapsed"),
        horizon=check_non_negative(horizon, "horizon"),
        probability=p,
    )
