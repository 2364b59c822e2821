"""Standard normal CDF and chi-squared survival function.

The chi-squared tail is the regularized upper incomplete gamma function
Q(df/2, t/2), evaluated with the usual split: power series for P when
x < a + 1, Lentz continued fraction for Q otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

_TINY = 1e-300


class ConvergenceError(ArithmeticError):
    """An iterative evaluation hit its iteration cap."""


@dataclass(frozen=True)
class Tolerance:
    eps: float = 1e-15
    max_iter: int = 500

    def __post_init__(self) -> None:
        if not self.eps > 0:
            raise ValueError("eps must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be at least 1")


DEFAULT_TOL = Tolerance()


def std_normal_cdf(z: float) -> float:
    if math.isnan(z):
        raise ValueError("non-finite argument")
    # erfc keeps full relative accuracy in the lower tail, unlike 1 + erf
    return 0.5 * math.erfc(-z / math.sqrt(2.0))


def _lower_series(a: float, x: float, tol: Tolerance) -> float:
    """Regularized lower incomplete gamma P(a, x) by power series."""
    term = 1.0 / a
    total = term
    ap = a
    for _ in range(tol.max_iter):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * tol.eps:
            return total * math.exp(-x + a * math.log(x) - math.lgamma(a))
    raise ConvergenceError(f"series for P({a}, {x}) did not converge")


def _upper_continued_fraction(a: float, x: float, tol: Tolerance) -> float:
    """Regularized upper incomplete gamma Q(a, x) by modified Lentz."""
    b = x + 1.0 - a
    c = 1.0 / _TINY
    d = 1.0 / b
    h = d
    for i in range(1, tol.max_iter + 1):
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
        if abs(delta - 1.0) < tol.eps:
            return math.exp(-x + a * math.log(x) - math.lgamma(a)) * h
    raise ConvergenceError(f"continued fraction for Q({a}, {x}) did not converge")


def regularized_upper_gamma(a: float, x: float, tol: Tolerance = DEFAULT_TOL) -> float:
    """Q(a, x) = Gamma(a, x) / Gamma(a) for a > 0, x >= 0."""
    if not a > 0:
        raise ValueError("shape parameter must be positive")
    if math.isnan(x) or x < 0:
        raise ValueError("x must be non-negative")
    if x == 0.0:
        return 1.0
    if math.isinf(x):
        return 0.0
    if x < a + 1.0:
        return min(1.0, max(0.0, 1.0 - _lower_series(a, x, tol)))
    return min(1.0, max(0.0, _upper_continued_fraction(a, x, tol)))


def chi_squared_sf(t: float, df: int, tol: Tolerance = DEFAULT_TOL) -> float:
    """P(X >= t) for X ~ chi-squared with ``df`` degrees of freedom."""
    if math.isnan(t):
        raise ValueError("non-finite argument")
    if t < 0:
        raise ValueError("negative statistic")
    if df == 0:
        raise ValueError("zero degrees of freedom")
    if df < 0 or int(df) != df:
        raise ValueError("degrees of freedom must be a positive integer")
    return regularized_upper_gamma(df / 2.0, t / 2.0, tol)
