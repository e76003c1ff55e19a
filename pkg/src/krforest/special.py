"""Modified Bessel functions of the first kind, orders 0 and 1.

Power series below ``SERIES_CUTOFF``, Hankel asymptotic expansion above it.
The expansion is evaluated in log space so :func:`log_i0` stays finite for
arguments far beyond the overflow point of ``exp``.
"""
import math

from numba import njit

SERIES_CUTOFF = 15.0


@njit(cache=True)
def _series(x, order):
    half = 0.5 * x
    term = 1.0 if order == 0 else half
    total = term
    q = half * half
    m = 0
    while True:
        m += 1
        term *= q / (m * (m + order))
        total += term
        if term < 1e-17 * total:
            return total


@njit(cache=True)
def _asymptotic_sum(x, order):
    # sum of (-1)^k a_k(order) / x^k, truncated at the smallest term
    mu = 4.0 * order * order
    term = 1.0
    total = 1.0
    k = 0
    while True:
        k += 1
        nxt = -term * (mu - (2 * k - 1) ** 2) / (k * 8.0 * x)
        if abs(nxt) >= abs(term) or abs(nxt) < 1e-17 * abs(total):
            if abs(nxt) < abs(term):
                total += nxt
            return total
        term = nxt
        total += term


def _check(x):
    x = float(x)
    if x < 0 or math.isnan(x):
        raise ValueError(f"argument must be >= 0, got {x}")
    return x


@njit(cache=True)
def _log_i0(x):
    if x < SERIES_CUTOFF:
        return math.log(_series(x, 0))
    return x - 0.5 * math.log(2.0 * math.pi * x) + math.log(_asymptotic_sum(x, 0))


def log_i0(x):
    """``log(I_0(x))`` for ``x >= 0``."""
    return _log_i0(_check(x))


def log_i1(x):
    """``log(I_1(x))`` for ``x > 0``."""
    x = _check(x)
    if x == 0.0:
        return -math.inf
    if x < SERIES_CUTOFF:
        return math.log(_series(x, 1))
    return x - 0.5 * math.log(2.0 * math.pi * x) + math.log(_asymptotic_sum(x, 1))


def i0(x):
    """``I_0(x)``; overflows to ``inf`` past ``x ~ 713``."""
    try:
        return math.exp(log_i0(x))
    except OverflowError:
        return math.inf


def i1(x):
    """``I_1(x)``; overflows to ``inf`` past ``x ~ 713``."""
    try:
        return math.exp(log_i1(x))
    except OverflowError:
        return math.inf


def bessel_ratio(x):
    """``I_1(x) / I_0(x)``, the mean resultant length of a von Mises law."""
    x = _check(x)
    if x == 0.0:
        return 0.0
    return math.exp(log_i1(x) - log_i0(x))
