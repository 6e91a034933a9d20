"""Exponential waiting-time mathematics.

Density, CDF and quantile of the exponential distribution, the
maximum-likelihood fit of an IAT sample, the empirical distribution
function, and QQ-plot support with pointwise order-statistic confidence
bands.  A small sklearn-style estimator wraps the fit for pipeline use.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _special
from .domain import ExponentialFit
from .errors import InsufficientDataError
from .validation import (
    as_float_array,
    check_positive_sample,
    check_probability,
    check_rate,
)

__all__ = [
    "EdfPoint",
    "QqPoint",
    "ExponentialIatModel",
    "exp_pdf",
    "exp_cdf",
    "exp_quantile",
    "fit_mle",
    "edf",
    "qq_points",
]


def exp_pdf(t, rate):
    """Density of the exponential distribution: rate*exp(-rate*t) for t >= 0."""
    rate = check_rate(rate)
    t_arr = np.asarray(t, dtype=float)
    out = np.where(t_arr < 0.0, 0.0, rate * np.exp(-rate * np.maximum(t_arr, 0.0)))
    return float(out) if np.isscalar(t) or t_arr.ndim == 0 else out


def exp_cdf(t, rate):
    """CDF of the exponential distribution: 1 - exp(-rate*t) for t >= 0."""
    rate = check_rate(rate)
    t_arr = np.asarray(t, dtype=float)
    out = np.where(t_arr < 0.0, 0.0, -np.expm1(-rate * np.maximum(t_arr, 0.0)))
    return float(out) if np.isscalar(t) or t_arr.ndim == 0 else out


def exp_quantile(p, rate):
    """Quantile (inverse CDF): -ln(1-p)/rate for p in [0, 1)."""
    rate = check_rate(rate)
    p_arr = np.asarray(p, dtype=float)
    if np.any(p_arr < 0.0) or np.any(p_arr >= 1.0):
        raise ValueError("p must be in [0, 1)")
    out = -np.log1p(-p_arr) / rate
    return float(out) if np.isscalar(p) or p_arr.ndim == 0 else out


def fit_mle(iats) -> ExponentialFit:
    """Maximum-likelihood exponential fit: rate = 1 / sample mean.

    Accepts an :class:`IatSeries` or any positive 1-d sequence.  The
    sample standard deviation uses the n-1 denominator and is ``None``
    when there is a single observation.
    """
    values = check_positive_sample(iats, "iats", min_n=1)
    n = values.size
    mean = float(values.mean())
    sd = float(values.std(ddof=1)) if n > 1 else None
    return ExponentialFit(rate=1.0 / mean, n=n, sample_mean=mean, sample_sd=sd)


@dataclass(frozen=True)
class EdfPoint:
    """One step of the empirical distribution function."""

    t: float
    empirical_prob: float


def edf(iats) -> list[EdfPoint]:
    """Empirical distribution function, ties merged into single steps."""
    values = check_positive_sample(iats, "iats", min_n=1)
    uniq, counts = np.unique(values, return_counts=True)
    cum = np.cumsum(counts) / values.size
    return [EdfPoint(float(t), float(p)) for t, p in zip(uniq, cum)]


@dataclass(frozen=True)
class QqPoint:
    """One QQ-plot point with its pointwise confidence band."""

    observed_quantile: float
    theoretical_quantile: float
    lower_band: float
    upper_band: float


def qq_points(iats, fit: ExponentialFit, band_level: float = 0.95) -> list[QqPoint]:
    """QQ data against the fitted model, with order-statistic bands.

    The i-th order statistic is paired with the model quantile at the
    plotting position p_i = (i - 0.5)/n.  Band endpoints come from the
    Beta(i, n+1-i) law of the i-th uniform order statistic, pushed
    through the model quantile function.
    """
    values = check_positive_sample(iats, "iats", min_n=1)
    n = values.size
    if n < 2:
        raise InsufficientDataError("qq_points needs at least 2 observations")
    band_level = check_probability(band_level, "band_level")
    if band_level <= 0.0:
        raise ValueError("band_level must be in (0, 1)")
    alpha = 1.0 - band_level
    ordered = np.sort(values)
    points = []
    for i, x in enumerate(ordered, start=1):
        p = (i - 0.5) / n
        lo_p = _special.beta_ppf(alpha / 2.0, i, n + 1 - i)
        hi_p = _special.beta_ppf(1.0 - alpha / 2.0, i, n + 1 - i)
        points.append(
            QqPoint(
                observed_quantile=float(x),
                theoretical_quantile=exp_quantile(p, fit.rate),
                lower_band=exp_quantile(lo_p, fit.rate),
                upper_band=exp_quantile(hi_p, fit.rate),
            )
        )
    return points


class ExponentialIatModel:
    """Estimator wrapping the exponential fit (fit/transform/predict).

    After ``fit`` the instance exposes ``rate_``, ``n_``, ``mean_`` and
    ``sd_``.  ``transform`` applies the probability-integral transform
    (fitted CDF); ``predict`` returns the probability of at least one
    event within the given horizons.  ``get_params``/``set_params``
    follow the usual estimator protocol so the class clones cleanly.
    """

    def __init__(self, band_level: float = 0.95):
        self.band_level = band_level

    # -- estimator protocol -------------------------------------------------
    def get_params(self, deep: bool = True) -> dict:
        return {"band_level": self.band_level}

    def set_params(self, **params) -> "ExponentialIatModel":
        for key, value in params.items():
            if key not in self.get_params():
                raise ValueError(f"unknown parameter {key!r}")
            setattr(self, key, value)
        return self

    def _require_fitted(self) -> None:
        if not hasattr(self, "fit_result_"):
            raise RuntimeError("model is not fitted; call fit(X) first")

    # -- modeling ------------------------------------------------------------
    def fit(self, X, y=None) -> "ExponentialIatModel":
        fit = fit_mle(X)
        self.fit_result_: ExponentialFit = fit
        self.rate_ = fit.rate
        self.n_ = fit.n
        self.mean_ = fit.sample_mean
        self.sd_ = fit.sample_sd
        return self

    def transform(self, X) -> np.ndarray:
        self._require_fitted()
        return np.asarray(exp_cdf(as_float_array(X, "X"), self.rate_))

    def predict(self, horizons) -> np.ndarray:
        self._require_fitted()
        h = as_float_array(horizons, "horizons")
        if h.size and h.min() < 0.0:
            raise ValueError("horizons must be non-negative")
        return np.asarray(exp_cdf(h, self.rate_))

    def survival(self, t) -> np.ndarray:
        self._require_fitted()
        return 1.0 - self.transform(t)

    def quantile(self, p):
        self._require_fitted()
        return exp_quantile(p, self.rate_)

    def score(self, X, y=None) -> float:
        """Mean log-likelihood of X under the fitted model."""
        self._require_fitted()
        values = check_positive_sample(X, "X", min_n=1)
        return float(np.mean(math.log(self.rate_) - self.rate_ * values))

    def qq(self, X, band_level: float | None = None) -> list[QqPoint]:
        self._require_fitted()
        level = self.band_level if band_level is None else band_level
        return qq_points(X, self.fit_result_, band_level=level)
