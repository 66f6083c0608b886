"""Maclaurin-series evaluation of U, V, W and derivatives.

This is the slow, independent reference path: everything is summed from
origin values and confluent-hypergeometric (or direct Taylor) series, with
an explicit running estimate of cancellation loss.  It doubles as the
validation oracle for the quadrature assemblies at moderate parameters.

The window |x| <= X_SER, |a| <= A_SER keeps the oracle at >= 1e-9 accuracy
in double precision; larger arguments must use the contour-integral path.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import scipy.special as sc

X_SER = 6.0
A_SER = 15.0
LOSS_CAP = 6.0          # flagged unreliable beyond this many lost digits

_EPS = 2.220446049250313e-16
_MAX_TERMS = 800


class WindowError(ValueError):
    """Arguments outside the series oracle's validity window."""


@dataclass(frozen=True)
class SeriesResult:
    value: float
    derivative: float
    terms_used: int
    cancellation_loss: float

    @property
    def reliable(self) -> bool:
        return self.cancellation_loss <= LOSS_CAP


# --------------------------------------------------------------------------- #
# confluent hypergeometric series with loss tracking
# --------------------------------------------------------------------------- #

def kummer_m(alpha: float, c: float, w: float) -> tuple[float, float, int]:
    """1F1(alpha, c; w) by direct summation.

    Returns (sum, max |partial sum|, terms).  Termination follows the
    two-consecutive-small-terms rule so alternating tails cannot alias a
    single small term.
    """
    term = 1.0
    acc = 1.0
    peak = 1.0
    small = 0
    n = 0
    while n < _MAX_TERMS:
        term *= (alpha + n) * w / ((c + n) * (n + 1.0))
        acc += term
        n += 1
        peak = max(peak, abs(acc))
        if abs(term) <= _EPS * 1e-2 * max(abs(acc), 1e-300):
            small += 1
            if small >= 2:
                break
        else:
            small = 0
    return acc, peak, n


@dataclass(frozen=True)
class Y12:
    """Even/odd basis solutions y1, y2 and derivatives at (a, z)."""
    y1: float
    y1p: float
    y2: float
    y2p: float
    terms_used: int
    loss: float


def y12(a: float, z: float) -> Y12:
    """Basis solutions of y'' = (z^2/4 + a) y from their 1F1 forms.

    Default branch carries e^{-z^2/4} so all 1F1 terms are positive when
    a > 0; for a < 0 with |a| > z^2/2 the reflected branch has the better
    term-sign pattern.
    """
    if not (math.isfinite(a) and math.isfinite(z)):
        raise ValueError("y12 requires finite arguments")
    w = 0.5 * z * z
    use_second = not (a < 0.0 and abs(a) > w)
    if use_second:
        al = 0.5 * a + 0.25
        be = 0.5 * a + 0.75
        e = math.exp(-0.5 * w)
        m1, p1, n1 = kummer_m(al, 0.5, w)
        m1s, p1s, n1s = kummer_m(al + 1.0, 1.5, w)
        m2, p2, n2 = kummer_m(be, 1.5, w)
        m2s, p2s, n2s = kummer_m(be + 1.0, 2.5, w)
        y1 = e * m1
        y1p = e * z * (2.0 * al * m1s - 0.5 * m1)
        y2 = z * e * m2
        y2p = e * ((1.0 - w) * m2 + (4.0 * be * w / 3.0) * m2s)
    else:
        al = 0.25 - 0.5 * a
        be = 0.75 - 0.5 * a
        e = math.exp(0.5 * w)
        m1, p1, n1 = kummer_m(al, 0.5, -w)
        m1s, p1s, n1s = kummer_m(al + 1.0, 1.5, -w)
        m2, p2, n2 = kummer_m(be, 1.5, -w)
        m2s, p2s, n2s = kummer_m(be + 1.0, 2.5, -w)
        y1 = e * m1
        y1p = e * z * (0.5 * m1 - 2.0 * al * m1s)
        y2 = z * e * m2
        y2p = e * ((1.0 + w) * m2 - (4.0 * be * w / 3.0) * m2s)
    loss = 0.0
    for val, pk in ((m1, p1), (m2, p2)):
        if val != 0.0:
            loss = max(loss, math.log10(max(pk / abs(val), 1.0)))
    return Y12(y1, y1p, y2, y2p, n1 + n1s + n2 + n2s, loss)


# --------------------------------------------------------------------------- #
# origin values
# --------------------------------------------------------------------------- #

def origin_values_uv(a: float) -> tuple[float, float, float, float]:
    """U, U', V, V' at the origin, via reciprocal gammas so poles give 0."""
    rg = sc.rgamma
    sq_pi = math.sqrt(math.pi)
    u0 = sq_pi * 2.0 ** (-(0.5 * a + 0.25)) * float(rg(0.75 + 0.5 * a))
    u0p = -sq_pi * 2.0 ** (-(0.5 * a - 0.25)) * float(rg(0.25 + 0.5 * a))
    v0 = math.pi * 2.0 ** (0.5 * a + 0.25) \
        * float(rg(0.75 - 0.5 * a)) ** 2 * float(rg(0.25 + 0.5 * a))
    v0p = math.pi * 2.0 ** (0.5 * a + 0.75) \
        * float(rg(0.25 - 0.5 * a)) ** 2 * float(rg(0.75 + 0.5 * a))
    return u0, u0p, v0, v0p


# --------------------------------------------------------------------------- #
# assembled series evaluations
# --------------------------------------------------------------------------- #

@dataclass(frozen=True)
class UVSeries:
    U: SeriesResult
    V: SeriesResult


def _combine(c1: float, b1: float, c2: float, b2: float,
             extra_loss: float, terms: int) -> tuple[float, float]:
    val = c1 * b1 + c2 * b2
    big = max(abs(c1 * b1), abs(c2 * b2))
    if val == 0.0:
        loss = 0.0 if big == 0.0 else 99.0
    else:
        loss = math.log10(max(big / abs(val), 1.0))
    return val, loss + extra_loss


def uv_series(a: float, x: float) -> UVSeries:
    """U(a,x), V(a,x) and derivatives from origin values and y1/y2."""
    if abs(x) > X_SER or abs(a) > A_SER:
        raise WindowError(
            f"(a={a!r}, x={x!r}) outside series window "
            f"|x|<={X_SER}, |a|<={A_SER}")
    u0, u0p, v0, v0p = origin_values_uv(a)
    basis = y12(a, x)
    uval, uloss = _combine(u0, basis.y1, u0p, basis.y2, basis.loss, basis.terms_used)
    upval, uploss = _combine(u0, basis.y1p, u0p, basis.y2p, basis.loss, basis.terms_used)
    vval, vloss = _combine(v0, basis.y1, v0p, basis.y2, basis.loss, basis.terms_used)
    vpval, vploss = _combine(v0, basis.y1p, v0p, basis.y2p, basis.loss, basis.terms_used)
    return UVSeries(
        U=SeriesResult(uval, upval, basis.terms_used, max(uloss, uploss)),
        V=SeriesResult(vval, vpval, basis.terms_used, max(vloss, vploss)),
    )


@dataclass(frozen=True)
class WSeries:
    plus: SeriesResult    # W(a, x), W'(a, x)
    minus: SeriesResult   # W(a, -x), W'(a, -x)


def w_origin_values(a: float) -> tuple[float, float]:
    """W(a,0) and W'(a,0) from the modulus of a complex gamma ratio."""
    lg1 = sc.loggamma(complex(0.25, 0.5 * a))
    lg3 = sc.loggamma(complex(0.75, 0.5 * a))
    half_ratio = math.exp(0.5 * (lg1.real - lg3.real))
    w0 = 2.0 ** (-0.75) * half_ratio
    w0p = -(2.0 ** (-0.25)) / half_ratio
    return w0, w0p


def w_series(a: float, x: float) -> WSeries:
    """W(a, +-x) and derivatives from the even/odd Taylor recursion."""
    if abs(x) > X_SER or abs(a) > A_SER:
        raise WindowError(
            f"(a={a!r}, x={x!r}) outside series window "
            f"|x|<={X_SER}, |a|<={A_SER}")
    w0, w0p = w_origin_values(a)
    x2 = x * x

    def sum_even() -> tuple[float, float, float, int]:
        alpha_p, alpha_c = 1.0, a
        term = 1.0                      # alpha_0 x^0/0!
        acc = term
        dacc = 0.0
        peak = abs(acc)
        n = 0
        fact = 1.0
        small = 0
        while n < _MAX_TERMS:
            n += 1
            fact *= (2.0 * n - 1.0) * (2.0 * n)
            coef = alpha_c if n == 1 else None
            if n >= 2:
                alpha_n = a * alpha_c - 0.5 * (n - 1.0) * (2.0 * n - 3.0) * alpha_p
                alpha_p, alpha_c = alpha_c, alpha_n
                coef = alpha_c
            term = coef * x2 ** n / fact
            dterm = coef * (2.0 * n) * x2 ** n / (fact * x) if x != 0.0 else 0.0
            acc += term
            dacc += dterm
            peak = max(peak, abs(acc))
            if abs(term) <= _EPS * 1e-2 * max(abs(acc), 1e-300):
                small += 1
                if small >= 2:
                    break
            else:
                small = 0
        return acc, dacc, peak, n

    def sum_odd() -> tuple[float, float, float, int]:
        beta_p, beta_c = 1.0, a
        term = x                        # beta_0 x^1/1!
        acc = term
        dacc = 1.0
        peak = abs(acc)
        n = 0
        fact = 1.0
        small = 0
        while n < _MAX_TERMS:
            n += 1
            fact *= (2.0 * n) * (2.0 * n + 1.0)
            if n == 1:
                coef = beta_c
            else:
                beta_n = a * beta_c - 0.5 * (n - 1.0) * (2.0 * n - 1.0) * beta_p
                beta_p, beta_c = beta_c, beta_n
                coef = beta_c
            term = coef * x2 ** n * x / fact
            dterm = coef * (2.0 * n + 1.0) * x2 ** n / fact
            acc += term
            dacc += dterm
            peak = max(peak, abs(acc))
            if abs(term) <= _EPS * 1e-2 * max(abs(acc), 1e-300):
                small += 1
                if small >= 2:
                    break
            else:
                small = 0
        return acc, dacc, peak, n

    w1, w1p, pk1, n1 = sum_even()
    w2, w2p, pk2, n2 = sum_odd()
    loss_basis = math.log10(max(pk1 / max(abs(w1), 1e-300),
                                pk2 / max(abs(w2), 1e-300), 1.0))
    wp_val, l1 = _combine(w0, w1, w0p, w2, loss_basis, n1 + n2)
    wpp_val, l1d = _combine(w0, w1p, w0p, w2p, loss_basis, n1 + n2)
    wm_val, l2 = _combine(w0, w1, -w0p, w2, loss_basis, n1 + n2)
    wmp_val, l2d = _combine(-w0, w1p, w0p, w2p, loss_basis, n1 + n2)
    return WSeries(
        plus=SeriesResult(wp_val, wpp_val, n1 + n2, max(l1, l1d)),
        minus=SeriesResult(wm_val, wmp_val, n1 + n2, max(l2, l2d)),
    )
