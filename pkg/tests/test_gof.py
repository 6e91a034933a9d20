import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from slugfest.domain import IatSeries
from slugfest.errors import DegenerateDataError
from slugfest.gof import (
    KS_EXACT_MAX_N,
    PValueRange,
    ad_pvalue_range,
    ad_report,
    ad_statistic,
    chisq_binned,
    chisq_critical,
    gof_suite,
    ks_method,
    ks_pvalue,
    ks_report,
    ks_statistic,
    mc_pvalue,
)
from slugfest.model import exp_quantile, fit_mle


# ---------------------------------------------------------------------------
# Kolmogorov–Smirnov
# ---------------------------------------------------------------------------

def test_ks_statistic_by_hand():
    # n=2, rate fitted to mean 1: F(0.5)=0.39347, F(1.5)=0.77687
    series = [0.5, 1.5]
    fit = fit_mle(series)
    f1 = 1 - math.exp(-0.5)
    f2 = 1 - math.exp(-1.5)
    expected = max(f1 - 0.0, 0.5 - f1, f2 - 0.5, 1.0 - f2)
    assert ks_statistic(series, fit) == pytest.approx(expected, rel=1e-12)


def test_ks_method_switches_at_cutoff():
    assert ks_method(KS_EXACT_MAX_N) == "exact"
    assert ks_method(KS_EXACT_MAX_N + 1) == "asymptotic"


# frozen with scipy.stats.kstwo.sf(d, n)
KS_EXACT_ORACLE = [
    (0.2258423247292367, 8, 0.7311560589456003),
    (0.15, 20, 0.7044671549442872),
    (0.1, 60, 0.5521961259289287),
    (0.08, 100, 0.5182193645480672),
    (0.05, 140, 0.8576480297656114),
]


@pytest.mark.parametrize("d,n,expected", KS_EXACT_ORACLE)
def test_ks_exact_pvalue_oracle(d, n, expected):
    assert ks_pvalue(d, n, method="exact") == pytest.approx(expected, rel=1e-9)


# frozen with scipy.special.kolmogorov(sqrt(n) * d)
KS_ASYMPTOTIC_ORACLE = [
    (0.05, 141, 0.872491067132003),
    (0.06, 200, 0.46755799912056456),
    (0.03, 1000, 0.3291047890978151),
    (0.1581, 223, 2.880692122333262e-05),
]


@pytest.mark.parametrize("d,n,expected", KS_ASYMPTOTIC_ORACLE)
def test_ks_asymptotic_pvalue_oracle(d, n, expected):
    assert ks_pvalue(d, n, method="asymptotic") == pytest.approx(expected, rel=1e-9)


def test_ks_pvalue_boundaries():
    assert ks_pvalue(0.0, 50) == 1.0
    assert ks_pvalue(1.0, 50) == 0.0
    with pytest.raises(ValueError):
        ks_pvalue(1.5, 50)
    with pytest.raises(ValueError):
        ks_pvalue(0.1, 0)


@settings(max_examples=40, deadline=None)
@given(
    st.integers(min_value=2, max_value=120),
    st.floats(min_value=0.01, max_value=0.6),
    st.floats(min_value=0.01, max_value=0.6),
)
def test_ks_pvalue_monotone_in_d(n, d1, d2):
    lo, hi = sorted((d1, d2))
    assert ks_pvalue(hi, n) <= ks_pvalue(lo, n) + 1e-12


def test_ks_report_round_trips_to_json(small_series, small_fit):
    rep = ks_report(small_series, small_fit)
    payload = json.loads(rep.to_json_line())
    assert payload["test"] == "ks"
    assert payload["n"] == 8
    assert 0 <= payload["p"] <= 1


# ---------------------------------------------------------------------------
# Anderson–Darling
# ---------------------------------------------------------------------------

def test_ad_statistic_by_hand():
    # A2 for PIT values (0.25, 0.5, 0.75) is 0.2694308433724202
    series = [exp_quantile(u, 1.0) for u in (0.25, 0.5, 0.75)]
    fit = fit_mle(series)
    # re-standardize to the fitted rate: u = 1 - exp(-rate * t)
    u = sorted(1 - math.exp(-fit.rate * t) for t in series)
    i = np.arange(1, 4)
    expected = -3 - np.sum(
        (2 * i - 1) * (np.log(u) + np.log1p(-np.asarray(u)[::-1]))
    ) / 3
    assert ad_statistic(series, fit) == pytest.approx(expected, rel=1e-12)


def test_ad_statistic_known_rate_value():
    # with rate fixed at 1.0 the PIT values are exactly (0.25, 0.5, 0.75)
    from slugfest.domain import ExponentialFit

    series = [exp_quantile(u, 1.0) for u in (0.25, 0.5, 0.75)]
    fit = ExponentialFit(rate=1.0, n=3, sample_mean=1.0, sample_sd=None)
    assert ad_statistic(series, fit) == pytest.approx(0.2694308433724202, rel=1e-12)


def test_ad_rejects_degenerate_transform():
    from slugfest.domain import ExponentialFit

    fit = ExponentialFit(rate=1.0, n=2, sample_mean=1.0, sample_sd=None)
    with pytest.raises(DegenerateDataError):
        # exp(-800) underflows, so the PIT of the long gap is exactly 1
        ad_statistic(IatSeries((800.0, 1.0), None), fit)


def test_ad_range_brackets_table_rows():
    # estimated-rate critical values: 1.321 at 5%, 1.959 at 1%
    r = ad_pvalue_range(1.5, 100)
    assert (r.lower, r.upper) == (0.025, 0.05)
    assert str(r) == "0.025-0.05"
    below = ad_pvalue_range(0.2, 100)
    assert below.lower == 0.25 and below.upper == 1.0
    assert str(below) == "> 0.25"
    above = ad_pvalue_range(9.0, 100)
    assert above.lower == 0.0 and above.upper == 0.0025
    assert str(above) == "< 0.0025"


def test_ad_small_sample_modification():
    # A* = A2 * (1 + 0.6/n): statistic 1.25 at n=5 crosses the 5% line
    assert ad_pvalue_range(1.25, 1000).upper == 0.10  # unmodified: 1.062-1.321
    r = ad_pvalue_range(1.25, 5)  # 1.25 * 1.12 = 1.4 -> 1.321-1.591
    assert (r.lower, r.upper) == (0.025, 0.05)


def test_ad_known_rate_table():
    r = ad_pvalue_range(2.6, 50, estimated_rate=False)
    assert (r.lower, r.upper) == (0.025, 0.05)  # between 2.492 and 3.070
    assert ad_pvalue_range(1.0, 50, estimated_rate=False).lower == 0.25
    assert ad_pvalue_range(4.0, 50, estimated_rate=False).upper == 0.01


def test_ad_tables_match_simulation():
    """Empirical tail rates at the tabled critical values, fitted-rate case.

    10k exponential samples of size 100: P(A* > 1.321) should be ~5%,
    P(A* > 1.959) ~1%.
    """
    rng = np.random.default_rng(987)
    n, reps = 100, 10_000
    samples = rng.exponential(1.0, size=(reps, n))
    rates = 1.0 / samples.mean(axis=1)
    u = np.sort(1.0 - np.exp(-rates[:, None] * samples), axis=1)
    i = np.arange(1, n + 1)
    a2 = -n - ((2 * i - 1) * (np.log(u) + np.log(1 - u[:, ::-1]))).sum(axis=1) / n
    a_star = a2 * (1 + 0.6 / n)
    assert abs((a_star > 1.321).mean() - 0.05) < 0.01
    assert abs((a_star > 1.959).mean() - 0.01) < 0.005


def test_ad_report_carries_range(small_series, small_fit):
    rep = ad_report(small_series, small_fit)
    payload = json.loads(rep.to_json_line())
    assert payload["test"] == "ad"
    assert "p_range" in payload and "p" not in payload


def test_pvalue_range_validation():
    with pytest.raises(ValueError):
        PValueRange(0.5, 0.1)


# ---------------------------------------------------------------------------
# Chi-squared
# ---------------------------------------------------------------------------

def test_chisq_all_mass_in_one_bin():
    # every observation below the first decile edge: statistic = n(b-1)
    series = [0.001] * 50
    from slugfest.domain import ExponentialFit

    fit = ExponentialFit(rate=1.0, n=50, sample_mean=1.0, sample_sd=None)
    rep = chisq_binned(series, fit, bins=10)
    assert rep.statistic == pytest.approx(50 * 9)
    assert rep.df == 10


def test_chisq_df_override():
    series = IatSeries(tuple(float(i) for i in range(1, 61)), None)
    fit = fit_mle(series)
    rep = chisq_binned(series, fit, bins=6, df_override=5)
    assert rep.df == 5


def test_chisq_uniform_quantile_sample_is_tiny():
    # quantiles of the fitted law fill every equal-probability cell evenly
    fit_rate = 0.01
    n, bins = 100, 10
    series = [exp_quantile((i + 0.5) / n, fit_rate) for i in range(n)]
    from slugfest.domain import ExponentialFit

    fit = ExponentialFit(rate=fit_rate, n=n, sample_mean=1 / fit_rate, sample_sd=None)
    rep = chisq_binned(series, fit, bins=bins)
    assert rep.statistic == pytest.approx(0.0, abs=1e-9)
    assert rep.p_value == pytest.approx(1.0)


def test_chisq_small_sample_warns(small_series, small_fit):
    with pytest.warns(UserWarning):
        chisq_binned(small_series, small_fit, bins=4)


def test_chisq_critical_value():
    # scipy.stats.chi2.isf(0.05, 10)
    assert chisq_critical(0.05, 10) == pytest.approx(18.30703805327515, abs=1e-3)


def test_chisq_pvalue_oracle():
    # scipy.stats.chi2.sf(44.616, 10)
    from slugfest._special import chisq_sf

    assert chisq_sf(44.616, 10) == pytest.approx(2.5504810715152802e-06, rel=1e-9)


# ---------------------------------------------------------------------------
# Monte Carlo
# ---------------------------------------------------------------------------

def test_mc_pvalue_is_deterministic(small_series):
    a = mc_pvalue(small_series, test="ks", replications=300, seed=42)
    b = mc_pvalue(small_series, test="ks", replications=300, seed=42)
    assert a == b
    c = mc_pvalue(small_series, test="ks", replications=300, seed=43)
    assert a != c  # overwhelmingly likely


def test_mc_pvalue_tracks_exact_for_well_fit_data():
    rng = np.random.default_rng(5)
    series = rng.exponential(100, size=80)
    fit = fit_mle(series)
    d = ks_statistic(series, fit)
    mc = mc_pvalue(series, test="ks", replications=2000, seed=11)
    assert 0 < mc <= 1
    # refitting each replicate shrinks D under the null, so the bootstrap
    # p-value sits below the known-parameter table value
    assert mc <= ks_pvalue(d, len(series)) + 0.02


def test_mc_pvalue_validates_inputs(small_series):
    with pytest.raises(ValueError):
        mc_pvalue(small_series, test="chisq")
    with pytest.raises(ValueError):
        mc_pvalue(small_series, replications=50)


def test_gof_suite_contents():
    rng = np.random.default_rng(8)
    series = rng.exponential(50, size=40)
    fit = fit_mle(series)
    reports = gof_suite(series, fit, bins=4)
    names = [r.test_name for r in reports]
    assert names == ["ks", "ad", "chisq"]
    with_mc = gof_suite(series, fit, bins=4, mc_replications=200, seed=3)
    assert [r.test_name for r in with_mc] == [
        "ks",
        "ad",
        "chisq",
        "ks-bootstrap",
        "ad-bootstrap",
    ]
