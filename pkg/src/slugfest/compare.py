"""Era comparison: one-way ANOVA and Tukey-Kramer family-wise intervals.

The studentized-range distribution behind the Tukey intervals is
evaluated directly: the range probability for a standard normal sample
comes from an inner Gauss-Legendre grid over normal CDF differences,
and finite degrees of freedom add an outer adaptive quadrature over the
pooled-scale (scaled chi) density.  Quantiles invert the CDF by
bisection to 1e-6 in probability.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Mapping

import numpy as np
from scipy import integrate
from scipy.special import ndtr

from . import _special
from .domain import IatSeries
from .errors import DegenerateDataError, InsufficientDataError
from .validation import check_positive_sample, check_probability

__all__ = [
    "AnovaReport",
    "GroupSummary",
    "TukeyInterval",
    "anova_oneway",
    "tukey_hsd",
    "studentized_range_cdf",
    "studentized_range_quantile",
]

TUKEY_CSV_HEADER = "era_a,era_b,diff,lower,upper,significant"


def _as_named_groups(groups) -> list[tuple[str, np.ndarray]]:
    """Normalize a mapping or sequence of samples to (name, array) pairs."""
    if isinstance(groups, Mapping):
        items = list(groups.items())
    else:
        items = [(f"group{i + 1}", g) for i, g in enumerate(groups)]
    named = []
    for name, sample in items:
        if isinstance(sample, IatSeries):
            sample = sample.values
        arr = np.asarray(sample, dtype=float)
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError(f"group {name!r} must be a non-empty 1-d sample")
        named.append((str(name), arr))
    if len(named) < 2:
        raise InsufficientDataError("need at least 2 groups to compare")
    return named


@dataclass(frozen=True)
class GroupSummary:
    name: str
    n: int
    mean: float


@dataclass(frozen=True)
class AnovaReport:
    f_statistic: float
    df_between: int
    df_within: int
    p_value: float
    groups: tuple[GroupSummary, ...]
    ss_between: float
    ss_within: float

    @property
    def ms_within(self) -> float:
        return self.ss_within / self.df_within

    def to_json_dict(self) -> dict:
        return {
            "f_statistic": self.f_statistic,
            "df_between": self.df_between,
            "df_within": self.df_within,
            "p": self.p_value,
            "groups": [
                {"name": g.name, "n": g.n, "mean": g.mean} for g in self.groups
            ],
        }


def anova_oneway(groups, transform: str | None = None) -> AnovaReport:
    """One-way fixed-effects ANOVA.

    ``groups`` is a mapping from name to sample, or a sequence of
    samples.  ``transform="log"`` compares log gaps instead of raw gaps
    (non-default; raw gaps are the standard analysis here).
    """
    named = _as_named_groups(groups)
    if transform not in (None, "log"):
        raise ValueError("transform must be None or 'log'")
    if transform == "log":
        named = [(name, np.log(check_positive_sample(a, name))) for name, a in named]

    k = len(named)
    total_n = sum(a.size for _, a in named)
    if total_n <= k:
        raise InsufficientDataError("total observations must exceed group count")

    grand_mean = sum(a.sum() for _, a in named) / total_n
    ss_between = sum(a.size * (a.mean() - grand_mean) ** 2 for _, a in named)
    ss_within = sum(((a - a.mean()) ** 2).sum() for _, a in named)
    df_between = k - 1
    df_within = total_n - k

    if ss_within == 0.0:
        if ss_between > 0.0:
            raise DegenerateDataError(
                "within-group variance is zero while group means differ"
            )
        f_stat, p = 0.0, 1.0
    else:
        f_stat = (ss_between / df_between) / (ss_within / df_within)
        p = _special.f_sf(f_stat, df_between, df_within)

    return AnovaReport(
        f_statistic=float(f_stat),
        df_between=df_between,
        df_within=df_within,
        p_value=float(p),
        groups=tuple(
            GroupSummary(name, a.size, float(a.mean())) for name, a in named
        ),
        ss_between=float(ss_between),
        ss_within=float(ss_within),
    )


# ---------------------------------------------------------------------------
# Studentized range distribution
# ---------------------------------------------------------------------------

_INFINITE_DF = 1e6  # beyond this the pooled scale is effectively constant


@lru_cache(maxsize=8)
def _gauss_legendre(n: int):
    nodes, weights = np.polynomial.legendre.leggauss(n)
    return nodes, weights


def _range_prob(w: float, k: int) -> float:
    """P(range of k standard normals <= w).

    k * integral of phi(z) * [Phi(z) - Phi(z - w)]^(k-1) dz, evaluated on
    a Gauss-Legendre grid over the effective support [-8, w + 8].
    """
    if w <= 0.0:
        return 0.0
    nodes, weights = _gauss_legendre(160)
    lo, hi = -8.0, w + 8.0
    z = 0.5 * (hi - lo) * nodes + 0.5 * (hi + lo)
    phi = np.exp(-0.5 * z * z) / math.sqrt(2.0 * math.pi)
    inner = ndtr(z) - ndtr(z - w)
    integrand = phi * np.power(inner, k - 1)
    value = k * 0.5 * (hi - lo) * np.dot(weights, integrand)
    return float(min(max(value, 0.0), 1.0))


def _chi_scale_logpdf_parts(df: float) -> float:
    """log of the normalizing constant of the scaled-chi density."""
    return (
        0.5 * df * math.log(df)
        - math.lgamma(0.5 * df)
        - (0.5 * df - 1.0) * math.log(2.0)
    )


def studentized_range_cdf(q: float, k: int, df: float) -> float:
    """CDF of the studentized range of k groups at ``df`` error degrees.

    ``df=math.inf`` gives the known-variance limit.  Finite df
    integrates the range probability against the scaled-chi density of
    the pooled standard deviation with adaptive quadrature.
    """
    if k < 2:
        raise ValueError("k must be >= 2")
    if df <= 0:
        raise ValueError("df must be positive")
    if q <= 0.0:
        return 0.0
    if math.isinf(df) or df > _INFINITE_DF:
        return _range_prob(q, k)

    log_const = _chi_scale_logpdf_parts(df)

    def outer(s: float) -> float:
        if s <= 0.0:
            return 0.0
        log_pdf = log_const + (df - 1.0) * math.log(s) - 0.5 * df * s * s
        return math.exp(log_pdf) * _range_prob(q * s, k)

    value, _abserr = integrate.quad(
        outer, 0.0, np.inf, epsabs=1e-10, epsrel=1e-9, limit=200
    )
    return float(min(max(value, 0.0), 1.0))


def studentized_range_quantile(p: float, k: int, df: float) -> float:
    """Quantile of the studentized range, by bisection on the CDF."""
    p = check_probability(p, "p")
    if p == 0.0:
        return 0.0
    lo, hi = 0.0, 8.0
    while studentized_range_cdf(hi, k, df) < p:
        hi *= 2.0
        if hi > 1e6:
            raise ArithmeticError("studentized range quantile bracket failed")
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        f = studentized_range_cdf(mid, k, df)
        if f < p:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-9 or abs(f - p) < 1e-7:
            break
    return 0.5 * (lo + hi)


# ---------------------------------------------------------------------------
# Tukey-Kramer intervals
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TukeyInterval:
    """One pairwise mean difference with its family-wise interval."""

    pair: tuple[str, str]
    mean_difference: float
    lower: float
    upper: float
    family_level: float
    significant: bool

    def __post_init__(self) -> None:
        if not self.lower <= self.mean_difference <= self.upper:
            raise ValueError("interval must contain the mean difference")


def tukey_hsd(groups, family_level: float = 0.95) -> list[TukeyInterval]:
    """Tukey-Kramer family-wise confidence intervals for all pairs.

    Interval for (i, j): (mean_i - mean_j) +/- q(alpha, k, df_within) /
    sqrt(2) * sqrt(MSW * (1/n_i + 1/n_j)), using the studentized-range
    quantile.  The Kramer form handles unequal group sizes.
    """
    family_level = check_probability(family_level, "family_level")
    if family_level <= 0.0:
        raise ValueError("family_level must be in (0, 1)")
    named = _as_named_groups(groups)
    k = len(named)
    total_n = sum(a.size for _, a in named)
    df_within = total_n - k
    if df_within < 1:
        raise InsufficientDataError("df_within must be >= 1")
    ss_within = sum(((a - a.mean()) ** 2).sum() for _, a in named)
    if ss_within == 0.0:
        raise DegenerateDataError("within-group variance is zero")
    msw = ss_within / df_within

    q = studentized_range_quantile(family_level, k, df_within)
    intervals = []
    for i in range(k):
        for j in range(i + 1, k):
            name_i, a_i = named[i]
            name_j, a_j = named[j]
            diff = float(a_i.mean() - a_j.mean())
            half = (
                q
                / math.sqrt(2.0)
                * math.sqrt(msw * (1.0 / a_i.size + 1.0 / a_j.size))
            )
            lower, upper = diff - half, diff + half
            intervals.append(
                TukeyInterval(
                    pair=(name_i, name_j),
                    mean_difference=diff,
                    lower=lower,
                    upper=upper,
                    family_level=family_level,
                    significant=not (lower <= 0.0 <= upper),
                )
            )
    return intervals


def tukey_to_csv(intervals, sig: int = 9) -> str:
    rows = [TUKEY_CSV_HEADER]
    for t in intervals:
        rows.append(
            f"{t.pair[0]},{t.pair[1]},{t.mean_difference:.{sig}g},"
            f"{t.lower:.{sig}g},{t.upper:.{sig}g},{str(t.significant).lower()}"
        )
    return "\n".join(rows) + "\n"
