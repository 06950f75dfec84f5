"""
Bessel kernels of Rademacher-type formulas.

I_nu for integer and half-integer order by its ascending series, the
elementary closed form of I_{3/2}, and the n-derivative of
sinh(c*sqrt(n - a)/k) / sqrt(n - a).
"""

from fractions import Fraction
from typing import Optional, Union

import mpmath

from utils.errors import DomainError


Order = Union[int, Fraction]


def _check_order(nu: Order) -> Fraction:
    nu = Fraction(nu)
    if (2 * nu).denominator != 1 or nu < 1:
        raise DomainError("Bessel order must be an integer or half-integer >= 1", nu=str(nu))
    return nu


def _series(nu: Fraction, x: mpmath.mpf) -> mpmath.mpf:
    if x == 0:
        return mpmath.mpf(0)
    order = mpmath.mpf(nu.numerator) / nu.denominator
    half = x / 2
    quarter_square = half * half
    term = mpmath.power(half, order) / mpmath.gamma(order + 1)
    total = term
    tolerance = mpmath.eps * 2 ** -8
    m = 0
    while True:
        m += 1
        term *= quarter_square / (m * (order + m))
        total += term
        if term <= tolerance * total:
            return total


def bessel_i(nu: Order, x, precision: Optional[int] = None) -> mpmath.mpf:
    """
    Modified Bessel function I_nu(x) by its ascending series.

    All terms are positive for x >= 0, so the sum carries no cancellation.

    Args:
        nu: Order in {1, 3/2, 2, 5/2, ...}
        x: Nonnegative argument
        precision: Significant digits; the ambient mpmath precision when omitted

    Returns:
        I_nu(x)
    """
    nu = _check_order(nu)
    if precision is None:
        x = mpmath.mpf(x)
        if x < 0:
            raise DomainError("Bessel argument must be nonnegative", x=mpmath.nstr(x, 15))
        return _series(nu, x)
    with mpmath.workdps(precision):
        return bessel_i(nu, x)


def bessel_i_three_halves(x, precision: Optional[int] = None) -> mpmath.mpf:
    """I_{3/2}(x) = sqrt(2/(pi x)) (cosh x - sinh x / x)."""
    with mpmath.workdps((precision or mpmath.mp.dps) + 10):
        x = mpmath.mpf(x)
        if x < 0:
            raise DomainError("Bessel argument must be nonnegative", x=mpmath.nstr(x, 15))
        if x == 0:
            return mpmath.mpf(0)
        value = mpmath.sqrt(2 / (mpmath.pi * x)) * (mpmath.cosh(x) - mpmath.sinh(x) / x)
    return +value


def sinh_kernel(n, k, c, a=0) -> mpmath.mpf:
    """
    d/dn ( sinh((c/k) y) / y ) with y = sqrt(n - a).

    Differentiated in closed form:
    (lam cosh(lam y) / y - sinh(lam y) / y^2) / (2y), lam = c/k.

    Args:
        n: Point of evaluation, n > a
        k: Positive integer
        c: Positive constant
        a: Shift

    Returns:
        The derivative at the current mpmath precision
    """
    shifted = mpmath.mpf(n) - mpmath.mpf(a)
    if shifted <= 0:
        raise DomainError("sinh kernel needs n > a", n=mpmath.nstr(mpmath.mpf(n), 15),
                          a=mpmath.nstr(mpmath.mpf(a), 15))
    y = mpmath.sqrt(shifted)
    lam = mpmath.mpf(c) / k
    return (lam * mpmath.cosh(lam * y) / y - mpmath.sinh(lam * y) / shifted) / (2 * y)
