"""Scalar special functions backing the p-value computations.

Regularized incomplete beta and gamma functions evaluated by the classic
continued-fraction / series schemes (Lentz's algorithm for the continued
fractions), plus the quantile inversions built on them by bisection.
Only the standard library is used here; array-oriented callers wrap
these with numpy where needed.
"""

from __future__ import annotations

import math

_EPS = 3e-14
_TINY = 1e-300
_MAXIT = 300


def _betacf(a: float, b: float, x: float) -> float:
    """Continued fraction for the incomplete beta function (modified Lentz)."""
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _TINY:
        d = _TINY
    d = 1.0 / d
    h = d
    for m in range(1, _MAXIT + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            return h
    raise ArithmeticError(f"incomplete beta CF did not converge (a={a}, b={b}, x={x})")


def betainc(a: float, b: float, x: float) -> float:
    """Regularized incomplete beta function I_x(a, b)."""
    if a <= 0.0 or b <= 0.0:
        raise ValueError("betainc requires a > 0 and b > 0")
    if x < 0.0 or x > 1.0:
        raise ValueError("betainc requires x in [0, 1]")
    if x == 0.0 or x == 1.0:
        return x
    ln_front = (
        math.lgamma(a + b)
        - math.lgamma(a)
        - math.lgamma(b)
        + a * math.log(x)
        + b * math.log1p(-x)
    )
    front = math.exp(ln_front)
    # Use the CF directly where it converges fastest, symmetry otherwise.
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _betacf(a, b, x) / a
    return 1.0 - front * _betacf(b, a, 1.0 - x) / b


def beta_ppf(q: float, a: float, b: float) -> float:
    """Quantile of the Beta(a, b) distribution by bisection on ``betainc``."""
    if not 0.0 <= q <= 1.0:
        raise ValueError("q must be in [0, 1]")
    if q == 0.0:
        return 0.0
    if q == 1.0:
        return 1.0
    lo, hi = 0.0, 1.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        f = betainc(a, b, mid)
        if f < q:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-14 and abs(f - q) < 1e-10:
            break
    return 0.5 * (lo + hi)


def _gamma_series(a: float, x: float) -> float:
    """Series for the regularized lower incomplete gamma P(a, x), x < a+1."""
    ap = a
    summation = 1.0 / a
    term = summation
    for _ in range(_MAXIT):
        ap += 1.0
        term *= x / ap
        summation += term
        if abs(term) < abs(summation) * _EPS:
            return summation * math.exp(-x + a * math.log(x) - math.lgamma(a))
    raise ArithmeticError(f"incomplete gamma series did not converge (a={a}, x={x})")


def _gamma_cf(a: float, x: float) -> float:
    """Continued fraction for the regularized upper incomplete gamma Q(a, x)."""
    b = x + 1.0 - a
    c = 1.0 / _TINY
    d = 1.0 / b
    h = d
    for i in range(1, _MAXIT + 1):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < _TINY:
            d = _TINY
        c = b + an / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            return h * math.exp(-x + a * math.log(x) - math.lgamma(a))
    raise ArithmeticError(f"incomplete gamma CF did not converge (a={a}, x={x})")


def gammainc_upper(a: float, x: float) -> float:
    """Regularized upper incomplete gamma Q(a, x) = Gamma(a, x)/Gamma(a)."""
    if a <= 0.0:
        raise ValueError("gammainc_upper requires a > 0")
    if x < 0.0:
        raise ValueError("gammainc_upper requires x >= 0")
    if x == 0.0:
        return 1.0
    if x < a + 1.0:
        return 1.0 - _gamma_series(a, x)
    return _gamma_cf(a, x)


def chisq_sf(x: float, df: float) -> float:
    """Chi-squared survival function P(X > x) at ``df`` degrees of freedom."""
    if df <= 0:
        raise ValueError("df must be positive")
    if x <= 0.0:
        return 1.0
    return gammainc_upper(df / 2.0, x / 2.0)


def chisq_critical(level: float, df: float) -> float:
    """Upper critical value: the x with chisq_sf(x, df) == level."""
    if not 0.0 < level < 1.0:
        raise ValueError("level must be in (0, 1)")
    lo = 0.0
    hi = df + 10.0 * math.sqrt(2.0 * df) + 50.0
    while chisq_sf(hi, df) > level:
        hi *= 2.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        if chisq_sf(mid, df) > level:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def f_sf(f: float, df_num: float, df_den: float) -> float:
    """Survival function of the F distribution, via the incomplete beta."""
    if df_num <= 0 or df_den <= 0:
        raise ValueError("degrees of freedom must be positive")
    if f <= 0.0:
        return 1.0
    x = df_den / (df_den + df_num * f)
    return betainc(df_den / 2.0, df_num / 2.0, x)


def norm_cdf(z: float) -> float:
    """Standard normal CDF."""
    return 0.5 * math.erfc(-z / math.sqrt(2.0))
