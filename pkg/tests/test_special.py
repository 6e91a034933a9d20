"""The hand-rolled special functions against scipy references."""

import numpy as np
import pytest
import scipy.special as sp
import scipy.stats as st

from slugfest._special import (
    beta_ppf,
    betainc,
    chisq_critical,
    chisq_sf,
    f_sf,
    gammainc_upper,
    norm_cdf,
)


@pytest.mark.parametrize("a,b", [(1.0, 1.0), (0.5, 9.5), (3.0, 6.0), (12.0, 2.0),
                                 (224.0, 1.0), (1.0, 224.0), (40.0, 40.0)])
def test_betainc_grid(a, b):
    for x in (0.0, 1e-6, 0.1, 0.37, 0.5, 0.9, 1.0 - 1e-9, 1.0):
        assert betainc(a, b, x) == pytest.approx(sp.betainc(a, b, x), abs=1e-12)


@pytest.mark.parametrize("q,a,b,expected", [
    (0.025, 3.0, 6.0, 0.08523341413725354),
    (0.975, 3.0, 6.0, 0.6508557944128242),
    (0.5, 1.0, 1.0, 0.5),
    (0.01, 0.5, 9.5, 8.488104316082133e-06),
    (0.99, 12.0, 2.0, 0.988176088484146),
    (0.025, 1.0, 224.0, 0.00011301954131167891),
    (0.975, 224.0, 1.0, 0.9998869804586883),
])
def test_beta_ppf_oracle(q, a, b, expected):
    # frozen with scipy.stats.beta.ppf
    assert beta_ppf(q, a, b) == pytest.approx(expected, rel=1e-8, abs=1e-14)


def test_beta_ppf_random_grid():
    rng = np.random.default_rng(17)
    for _ in range(60):
        a = float(rng.uniform(0.3, 50))
        b = float(rng.uniform(0.3, 50))
        q = float(rng.uniform(0.001, 0.999))
        assert beta_ppf(q, a, b) == pytest.approx(
            st.beta.ppf(q, a, b), rel=1e-7, abs=1e-12
        )


def test_beta_ppf_endpoints():
    assert beta_ppf(0.0, 2.0, 3.0) == 0.0
    assert beta_ppf(1.0, 2.0, 3.0) == 1.0
    with pytest.raises(ValueError):
        beta_ppf(-0.1, 2.0, 3.0)


@pytest.mark.parametrize("s,x,expected", [
    (0.5, 0.25, 0.47950012218695337),
    (5.0, 2.0, 0.9473469826562889),
    (5.0, 12.0, 0.007600390681066992),
    (70.0, 80.0, 0.11859660059001899),
])
def test_gammainc_upper_oracle(s, x, expected):
    # frozen with scipy.special.gammaincc
    assert gammainc_upper(s, x) == pytest.approx(expected, rel=1e-10)


def test_chisq_sf_matches_scipy():
    for x, df in ((0.5, 1), (9.34, 10), (44.616, 10), (120.0, 100)):
        assert chisq_sf(x, df) == pytest.approx(st.chi2.sf(x, df), rel=1e-9)


def test_chisq_critical_inverts_sf():
    for level, df in ((0.05, 10), (0.01, 3), (0.25, 40)):
        c = chisq_critical(level, df)
        assert chisq_sf(c, df) == pytest.approx(level, rel=1e-6)


def test_f_sf_matches_scipy():
    for f, d1, d2 in ((8.0, 1, 2), (2.5, 5, 218), (0.3, 3, 12), (15.0, 2, 30)):
        assert f_sf(f, d1, d2) == pytest.approx(st.f.sf(f, d1, d2), rel=1e-9)


def test_norm_cdf_matches_scipy():
    for z in (-8.0, -3.0, -0.5, 0.0, 1.96, 6.0):
        assert norm_cdf(z) == pytest.approx(sp.ndtr(z), rel=1e-12, abs=1e-300)
