"""W(a, +-x) and derivatives from rotated-argument contour integrals.

One complex line integral yields both members of the pair W(a,x), W(a,-x)
(real and imaginary parts), in three regimes:

* a < 0 (any x): vertical line through the saddle e^{-i pi/4}(t+sqrt(t^2+1)).
* a > 0, t >= 1: vertical line through e^{-i pi/4}(t+sqrt(t^2-1)).
* a > 0, |t| < 1: the traced two-saddle descent path (contours.WpmPath),
  split into the exponentially dominant and recessive legs.

The |t| < 1 regime's imaginary part is smaller than the real part by
e^{-4 a eta}; following the published instability analysis, that loss is
quantified in ``accuracy_loss_digits``.  When the reflected-argument
contour stays on the principal sheet (|t| <= 0.68) the pair is instead
completed by a second evaluation at -t, which removes the loss.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Optional

from . import quadrature as quad
from .contours import Regime, WpmPath, eta_mid, xi_right, xi_tilde
from .scalar import cln1p_minus, ln_k_of_a, rho_star
from .scaled import ScaledReal
from .uv_integrals import QuadratureFailure, _Diag, _integrate

_E4 = cmath.exp(-0.25j * math.pi)
_LN10 = math.log(10.0)

# thresholds for completing the |t|<1 pair by a reflected evaluation
REFLECT_MIN_DIGITS = 2.0
REFLECT_T_MAX = 0.68
DELTA_MID = 1e-3          # half-width of the t = +-1 collar left to W_POS_RIGHT


@dataclass(frozen=True)
class WResult:
    """The W pair at +-x with accuracy metadata."""
    W_plus: ScaledReal
    Wp_plus: ScaledReal
    W_minus: ScaledReal
    Wp_minus: ScaledReal
    regime: Regime
    chi: Optional[float]
    accuracy_loss_digits: float
    wronskian_residual: float
    evaluations: int
    quad_err: float

    def swapped(self) -> "WResult":
        """The same pair viewed from the negated argument."""
        return WResult(self.W_minus, self.Wp_minus, self.W_plus, self.Wp_plus,
                       self.regime, self.chi, self.accuracy_loss_digits,
                       self.wronskian_residual, self.evaluations,
                       self.quad_err)


def _wronskian_residual(res: "WResult") -> float:
    p1 = -(res.W_plus * res.Wp_minus)
    p2 = -(res.Wp_plus * res.W_minus)
    try:
        return abs((p1 + p2 - 1.0).to_float())
    except OverflowError:
        return math.inf


def _with_residual(res: WResult) -> WResult:
    return WResult(res.W_plus, res.Wp_plus, res.W_minus, res.Wp_minus,
                   res.regime, res.chi, res.accuracy_loss_digits,
                   _wronskian_residual(res), res.evaluations, res.quad_err)


# --------------------------------------------------------------------------- #
# vertical-line regimes (a < 0 all t; a > 0 outer band)
# --------------------------------------------------------------------------- #

def _line_integrals(a: float, m: float, cross: float, sign: float,
                    tol: float, diag: _Diag) -> tuple[complex, complex]:
    """Q_g, Q_h on the vertical line w = w_+ + i q, w_+ = e^{-i pi/4} m.

    psi(q) = q^2/2 + sign * i * [ln(1+z) - z], z = i q / w_+; ``cross`` is
    the root factor sqrt(t^2 -+ 1) entering the derivative kernel.
    """
    w_plus = _E4 * m

    def fg(q: float) -> complex:
        z = 1j * q / w_plus
        psi = 0.5 * q * q + sign * 1j * cln1p_minus(z)
        ex = -a * psi
        if ex.real < -745.0:
            return 0j
        return cmath.exp(ex) / cmath.sqrt(1.0 + z)

    def fh(q: float) -> complex:
        z = 1j * q / w_plus
        psi = 0.5 * q * q + sign * 1j * cln1p_minus(z)
        ex = -a * psi
        if ex.real < -745.0:
            return 0j
        g = cmath.exp(ex) / cmath.sqrt(1.0 + z)
        if sign > 0.0:
            return (_E4 * cross + 1j * q) * g
        return (cross - _E4 * q) * g

    up2 = 0.5 * m * m
    curv = (1.0 + 2.0 * up2) / (4.0 * up2)
    scale = max(1e-3, min(1.0, 1.0 / math.sqrt(2.0 * a * curv)))
    qg = _integrate(fg, quad.half_line(0.0, scale), tol, diag, "Qg(+)") \
        + _integrate(fg, quad.half_line_down(0.0, scale), tol, diag, "Qg(-)")
    qh = _integrate(fh, quad.half_line(0.0, scale), tol, diag, "Qh(+)") \
        + _integrate(fh, quad.half_line_down(0.0, scale), tol, diag, "Qh(-)")
    return qg, qh


def w_neg(a: float, x: float, tol: float = 1e-13) -> WResult:
    """W(-a, +-x) and derivatives for a > 0 (i.e. negative first argument)."""
    if a <= 0.0:
        raise ValueError("w_neg requires a > 0 (computes W(-a, x))")
    xa = abs(x)
    t = xa / (2.0 * math.sqrt(a))
    m = t + math.hypot(t, 1.0)
    diag = _Diag()
    qg, qh = _line_integrals(a, m, math.hypot(t, 1.0), -1.0, tol, diag)

    chi = rho_star(-a) + 0.25 * math.pi + 2.0 * a * xi_tilde(t)
    ph = cmath.exp(1j * chi)
    ln_k = ln_k_of_a(-a)
    ln_base = 0.25 * math.log(a) - 0.5 * (math.log(math.pi) + math.log(m))
    half_ln_a = 0.5 * math.log(a)

    vg = ph * qg
    vh = 1j * ph * qh
    w_p = ScaledReal.from_log(ln_base + 0.5 * ln_k) * vg.real
    w_m = ScaledReal.from_log(ln_base - 0.5 * ln_k) * vg.imag
    wp_p = ScaledReal.from_log(ln_base + half_ln_a + 0.5 * ln_k) * vh.real
    wp_m = -(ScaledReal.from_log(ln_base + half_ln_a - 0.5 * ln_k) * vh.imag)

    res = WResult(w_p, wp_p, w_m, wp_m, Regime.W_NEG, chi, 0.0, 0.0,
                  diag.evaluations, diag.err)
    res = _with_residual(res)
    return res if x >= 0.0 else res.swapped()


def w_pos_right(a: float, t: float, tol: float = 1e-13) -> WResult:
    """W(a, +-x) and derivatives for a > 0, t = x/(2 sqrt(a)) >= 1."""
    if a <= 0.0:
        raise ValueError("w_pos_right requires a > 0")
    ta = abs(t)
    if ta < 1.0:
        raise ValueError("w_pos_right requires |t| >= 1")
    s = math.sqrt((ta - 1.0) * (ta + 1.0))
    m = ta + s
    diag = _Diag()
    qg, qh = _line_integrals(a, m, s, +1.0, tol, diag)

    phi_total = rho_star(a) + 2.0 * a * xi_right(ta)
    ph_g = cmath.exp(1j * (phi_total + 0.25 * math.pi))
    ph_h = cmath.exp(1j * phi_total)
    ln_k = ln_k_of_a(a)
    ln_base = 0.25 * math.log(a) - 0.5 * (math.log(math.pi) + math.log(m))
    half_ln_a = 0.5 * math.log(a)

    vg = ph_g * qg
    vh = ph_h * qh
    w_p = ScaledReal.from_log(ln_base + 0.5 * ln_k) * vg.real
    w_m = ScaledReal.from_log(ln_base - 0.5 * ln_k) * vg.imag
    wp_p = -(ScaledReal.from_log(ln_base + half_ln_a + 0.5 * ln_k) * vh.real)
    wp_m = ScaledReal.from_log(ln_base + half_ln_a - 0.5 * ln_k) * vh.imag

    # near-collar watch: the vertical line is only approximately a descent
    # path; a transient Re psi < 0 bump costs ~ a*|dip| nats of cancellation
    dip = 0.0
    w_plus_c = _E4 * m
    for q in (0.25, 0.5, 1.0, 1.5, 2.0, 3.0):
        psi = 0.5 * q * q + (1j * cln1p_minus(1j * q / w_plus_c))
        dip = min(dip, psi.real)
    loss = max(0.0, -a * dip) / _LN10

    res = WResult(w_p, wp_p, w_m, wp_m, Regime.W_POS_RIGHT, None, loss, 0.0,
                  diag.evaluations, diag.err)
    res = _with_residual(res)
    return res if t >= 0.0 else res.swapped()


# --------------------------------------------------------------------------- #
# a > 0, |t| < 1: traced two-saddle path
# --------------------------------------------------------------------------- #

def _wpm_k_integrals(path: WpmPath, a: float, tol: float, diag: _Diag
                     ) -> tuple[complex, complex]:
    """K and K_d of the middle-band representation from the traced path."""
    t = path.t
    phi_plus = complex(2.0 * path.eta - 0.25 * math.pi, 0.5 + t * t)
    phi_minus = complex(-2.0 * path.eta - 0.25 * math.pi, 0.5 + t * t)
    weight_minus = math.exp(-4.0 * a * path.eta) \
        if 4.0 * a * path.eta < 745.0 else 0.0

    def piece_integral(piece, kernel: Callable[[complex], complex],
                       norm: complex, what: str) -> complex:
        def f(p: float) -> complex:
            w, dw = piece.point(p)
            phi = 0.5 * w * w - 2.0 * t * _E4 * w - 1j * cmath.log(w)
            ex = a * (phi - norm)
            if ex.real < -745.0:
                return 0j
            return cmath.exp(ex) * kernel(w) * dw / cmath.sqrt(w)

        lo, hi = piece.p_start, piece.p_end
        sign = 1.0
        if lo > hi:
            lo, hi, sign = hi, lo, -1.0
        if lo == hi:
            return 0j
        return sign * _integrate(f, quad.finite(lo, hi), tol, diag, what)

    k_val = 0j
    kd_val = 0j
    kern_d = lambda w: (t * _E4 - w)  # noqa: E731
    for i, piece in enumerate(path.pieces()):
        if piece.norm == "plus":
            norm, wt = phi_plus, 1.0
        else:
            norm, wt = phi_minus, weight_minus
        if wt == 0.0:
            continue
        k_val += wt * piece_integral(piece, lambda w: 1.0, norm, f"K[{i}]")
        kd_val += wt * piece_integral(piece, kern_d, norm, f"Kd[{i}]")
    return k_val / 1j, kd_val / 1j


def _wpm_eval(a: float, t: float, tol: float, diag: _Diag
              ) -> tuple[ScaledReal, ScaledReal, ScaledReal, ScaledReal]:
    """One traced evaluation; returns (W+, W'+, W-, W'-) at x = 2 t sqrt(a)."""
    path = WpmPath(t, a_hint=a)
    k_val, kd_val = _wpm_k_integrals(path, a, tol, diag)
    rs = rho_star(a)
    ln_k = ln_k_of_a(a)
    eta = path.eta
    ln_base = 0.25 * math.log(a) + 2.0 * a * eta - 0.5 * math.log(math.pi)
    half_ln_a = 0.5 * math.log(a)
    vg = cmath.exp(1j * (rs + 0.125 * math.pi)) * k_val
    vh = cmath.exp(1j * (rs - 0.125 * math.pi)) * kd_val
    w_p = ScaledReal.from_log(ln_base + 0.5 * ln_k) * vg.real
    w_m = ScaledReal.from_log(ln_base - 0.5 * ln_k) * vg.imag
    wp_p = ScaledReal.from_log(ln_base + half_ln_a + 0.5 * ln_k) * vh.real
    wp_m = -(ScaledReal.from_log(ln_base + half_ln_a - 0.5 * ln_k) * vh.imag)
    return w_p, wp_p, w_m, wp_m


def w_pos_mid(a: float, t: float, tol: float = 1e-13) -> WResult:
    """W(a, +-x) and derivatives for a > 0, |t| <= 1 - DELTA_MID.

    For t >= 0 the traced representation gives W(a,x) at full accuracy and
    W(a,-x) with e^{-4 a eta} relative headroom; when that headroom is
    materially lossy and the reflected contour is sheet-safe, the recessive
    member is recomputed from a second trace at -t instead.
    """
    if a <= 0.0:
        raise ValueError("w_pos_mid requires a > 0")
    if abs(t) > 1.0 - DELTA_MID:
        raise ValueError(f"w_pos_mid requires |t| <= {1.0 - DELTA_MID}")
    if t < 0.0:
        return w_pos_mid(a, -t, tol).swapped()
    diag = _Diag()
    w_p, wp_p, w_m, wp_m = _wpm_eval(a, t, tol, diag)
    loss = max(0.0, 4.0 * a * eta_mid(t)) / _LN10
    if t == 0.0:
        # x = 0: the pair is identical by definition; no recessive member
        w_m, wp_m = w_p, wp_p
        loss = 0.0
    elif loss > REFLECT_MIN_DIGITS and t <= REFLECT_T_MAX:
        r_p, r_pp, _r_m, _r_mp = _wpm_eval(a, -t, tol, diag)
        w_m, wp_m = r_p, r_pp
        loss = 0.0
    res = WResult(w_p, wp_p, w_m, wp_m, Regime.W_POS_MID, None, loss, 0.0,
                  diag.evaluations, diag.err)
    return _with_residual(res)
