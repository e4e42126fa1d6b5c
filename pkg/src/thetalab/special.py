"""Special functions used throughout: incomplete Gamma, the Whittaker-type
kernel H for weak Maass coefficients, and exact roots of unity.

The upper incomplete Gamma function is hand-rolled (series for small
argument, Lentz continued fraction for large argument) so that the lift
code does not depend on scipy; scipy is only used as an independent oracle
in the test suite.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction

_EPS = 1e-16
_MAX_ITER = 600


def root_of_unity(x: Fraction | int) -> complex:
    """e(x) = exp(2 pi i x) with the rational angle reduced mod 1 first."""
    frac = Fraction(x) % 1
    if frac == 0:
        return 1.0 + 0.0j
    if 2 * frac == 1:
        return -1.0 + 0.0j
    if 4 * frac == 1:
        return 1.0j
    if 4 * frac == 3:
        return -1.0j
    angle = 2.0 * math.pi * float(frac)
    return complex(math.cos(angle), math.sin(angle))


def _lower_gamma_series(a: float, x: float) -> float:
    # gamma(a,x) * e^x * x^-a * Gamma-free form: sum_{n>=0} x^n / (a(a+1)...(a+n))
    term = 1.0 / a
    total = term
    ap = a
    for _ in range(_MAX_ITER):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * _EPS:
            return total * math.exp(-x + a * math.log(x))
    raise RuntimeError("incomplete gamma series did not converge (a=%g, x=%g)" % (a, x))


def _upper_gamma_cf(a: float, x: float) -> float:
    # Gamma(a,x) by modified Lentz on the standard continued fraction.
    tiny = 1e-300
    b = x + 1.0 - a
    c = 1.0 / tiny
    d = 1.0 / b if b != 0 else 1.0 / tiny
    h = d
    for i in range(1, _MAX_ITER):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            break
    else:
        raise RuntimeError("incomplete gamma cf did not converge (a=%g, x=%g)" % (a, x))
    return math.exp(-x + a * math.log(x)) * h


def exp1(x: float) -> float:
    """Exponential integral E1(x) = Gamma(0,x) for x > 0."""
    if x <= 0:
        raise ValueError("exp1 requires x > 0")
    if x >= 1.0:
        return _e1_cf(x)
    # power series: E1 = -gamma - log x + sum (-1)^{n+1} x^n / (n n!)
    total = -0.5772156649015328606 - math.log(x)
    term = 1.0
    for n in range(1, _MAX_ITER):
        term *= -x / n
        total -= term / n
        if abs(term / n) < abs(total) * _EPS + 1e-300:
            return total
    raise RuntimeError("E1 series did not converge")


def _e1_cf(x: float) -> float:
    # E1 via Lentz: e^-x * (1/(x+1-)) (1*1/(x+3-)) ...
    tiny = 1e-300
    b = x + 1.0
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, _MAX_ITER):
        an = -i * i
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            return math.exp(-x) * h
    raise RuntimeError("E1 cf did not converge")


def upper_gamma(a: float, x: float) -> float:
    """Upper incomplete Gamma(a, x) for real a >= 0, x > 0.

    Accurate to ~1e-14 relative; returns 0.0 on exponent underflow.
    """
    if x <= 0:
        raise ValueError("upper_gamma requires x > 0")
    if a < 0:
        # downward recurrence Gamma(a,x) = (Gamma(a+1,x) - x^a e^-x)/a
        shift = int(math.ceil(-a))
        g = upper_gamma(a + shift, x)
        aa = a + shift
        for _ in range(shift):
            aa -= 1.0
            g = (g - math.exp(aa * math.log(x) - x)) / aa
        return g
    if a == 0:
        return exp1(x)
    if -x + a * math.log(x) < -690:
        return 0.0
    if x < a + 1.0:
        return math.gamma(a) - _lower_gamma_series(a, x)
    return _upper_gamma_cf(a, x)


def h_kernel(k, w: float) -> float:
    """The second solution H(w) of the coefficient ODE in weight k.

    H(w) = e^{-w} * integral_{-2w}^infty e^{-t} t^{-k} dt.  For w < 0 this is
    e^{-w} Gamma(1-k, -2w) and requires k < 1; for w > 0 it is only evaluated
    at integer k <= 0, where Gamma(1-k, x) continues to an entire function
    x -> m! e^{-x} sum_{j<=m} x^j/j!  (m = -k).
    """
    if w == 0:
        raise ValueError("H undefined at 0")
    kf = float(k)
    if w < 0:
        if kf >= 1:
            raise ValueError("H(w) for w<0 requires weight k < 1")
        return math.exp(-w) * upper_gamma(1.0 - kf, -2.0 * w)
    if kf != int(kf) or kf > 0:
        raise ValueError("H(w) for w>0 implemented only for integer k <= 0")
    m = int(-kf)
    # Gamma(m+1, x) = m! e^{-x} sum_{j=0}^m x^j/j!, valid for all real x
    x = -2.0 * w
    s = 0.0
    term = 1.0
    for j in range(m + 1):
        if j > 0:
            term *= x / j
        s += term
    return math.exp(-w) * math.factorial(m) * math.exp(-x) * s


def h_kernel_asymptotic_ratio(k, w: float) -> float:
    """H(w) * (2|w|)^k * e^{|w|}, which tends to 1 as w -> -infty."""
    if w >= 0:
        raise ValueError("asymptotic ratio defined for w < 0")
    kf = float(k)
    return h_kernel(k, w) * math.exp(-kf * math.log(-2.0 * w)) * math.exp(-w)


def principal_power(z: complex, w: float) -> complex:
    """(-iz)^w e(-w/4)-free principal power helper: exp(w Log z)."""
    return cmath.exp(w * cmath.log(z))
