"""Contour-integral evaluation of U(a,x), V(a,x) and derivatives, a != 0.

Four regimes cover the (sign a, t) plane with t = x/(2 sqrt(|a|)):

* a > 0: one non-oscillating theta-integral pair for x >= 0 plus a real
  half-line pair for x <= 0 (both through the saddle t + sqrt(t^2+1)).
* a < 0, |t| <= 1: rotated-saddle theta-integrals G_j, H_j whose
  sin/cos(2a eta + pi/4) combination assembles both U and V.
* a < 0, t ~ 1: the same G_j, H_j from a two-leg contour (radial segment
  plus horizontal ray) that stays smooth at the turning point.
* a < 0, t >= 1: split representation with the exponentially small and
  large parts (e^{-2a xi}, e^{+2a xi}) carried separately; t <= -1 reuses
  the same six integrals through exact cos(pi a)/sin(pi a) reflection.

Every regime reports an integral-level Wronskian residual as its accuracy
certificate, and all prefactors are combined in log space (ScaledReal) so
no parameter range overflows.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Optional

import scipy.special as sc

from . import quadrature as quad
from .contours import (Regime, eta_mid, r_uneg_mid, r_uneg_right, r_upos,
                       theta0_mid, xi_right, xi_tilde)
from .scalar import (atan_minus, cospi, gamma_star, ln1p_minus, ln_gamma_aux,
                     sinpi, theta_cot_theta_m1)
from .scaled import ScaledReal

A_MIN_QUAD = 0.5   # below this |a| the api routes to the series path
T_NEAR1 = 0.9      # start of the two-leg turning-point representation
T_SMALL = 0.1      # below this |t| the theta-interval collapses; use u-path

_LN_2PI = math.log(2.0 * math.pi)
_SQRT_2_PI = math.sqrt(2.0 / math.pi)


class QuadratureFailure(RuntimeError):
    """An integral did not converge after the offset retry."""

    def __init__(self, msg: str, diag: quad.QuadratureResult):
        super().__init__(msg)
        self.diag = diag


@dataclass
class _Diag:
    evaluations: int = 0
    err: float = 0.0
    converged: bool = True

    def add(self, r: quad.QuadratureResult) -> None:
        self.evaluations += r.evaluations
        self.err = max(self.err, r.err_estimate)
        self.converged = self.converged and r.converged


def _integrate(f, interval, tol: float, diag: _Diag, what: str) -> complex:
    r = quad.integrate(f, interval, tol_rel=tol)
    if not r.converged:
        r = quad.integrate(f, interval, tol_rel=tol, offset=0.5)
        if not r.converged:
            raise QuadratureFailure(f"{what}: no convergence "
                                    f"(err~{r.err_estimate:.2e})", r)
    diag.add(r)
    return r.value


@dataclass(frozen=True)
class UVResult:
    """Assembled values at one argument, with the pair diagnostics."""
    U: ScaledReal
    Uprime: ScaledReal
    V: ScaledReal
    Vprime: ScaledReal
    regime: Regime
    wronskian_residual: float
    evaluations: int
    quad_err: float
    oracle_gap: Optional[float] = None


@dataclass(frozen=True)
class UVBundle:
    """Both members of the numerically satisfactory pair from one quadrature.

    ``plus`` holds (U, U', V, V') at x = +2|t| sqrt(|a|), ``minus`` the same
    at the negated argument.
    """
    plus: UVResult
    minus: UVResult

    def side(self, x: float) -> UVResult:
        return self.plus if x >= 0.0 else self.minus


# =========================================================================== #
# a > 0
# =========================================================================== #

def kernels_upos(theta: float, t: float) -> tuple[float, float, float]:
    """(psi, g, h) for the a>0 theta-integrals.

    psi <= 0 with psi(0) = 0; built from theta*cot(theta)-1 and the saddle
    offset delta = r - w0 so no leading digits cancel near the peak.
    """
    s1 = math.hypot(t, 1.0)
    w0 = t + s1
    tc1 = theta_cot_theta_m1(theta)
    arg = t * t + 1.0 + tc1
    if arg < 0.0:
        arg = 0.0
    s = math.sqrt(arg)
    c = math.cos(theta)
    half = math.sin(0.5 * theta)
    delta = (2.0 * half * half * w0 + tc1 / (s + s1)) / c
    r = w0 + delta
    psi = tc1 - 0.5 * delta * (r + w0) - math.log1p(delta / w0)
    den = 4.0 * math.sqrt(r) * math.cos(0.5 * theta) * s
    g = ((2.0 * c + 1.0) * r * r - 2.0 * t * r + 1.0) / den
    h = (r ** 3 - t * r * r * (2.0 * c - 1.0)
         + r * (2.0 * t * t + 1.0 + 2.0 * c) - t) / den
    return psi, g, h


def quad_I(a: float, t: float, tol: float = 1e-13,
           diag: Optional[_Diag] = None) -> tuple[float, float, _Diag]:
    """Peaked theta-integrals (I, I_d) for U(a,x), U'(a,x), x >= 0."""
    if a <= 0.0:
        raise ValueError("quad_I requires a > 0")
    diag = diag if diag is not None else _Diag()

    def f(theta: float) -> complex:
        psi, g, h = kernels_upos(theta, t)
        e = math.exp(a * psi) if a * psi > -745.0 else 0.0
        return complex(e * g, e * h)

    half_pi = 0.5 * math.pi
    v = _integrate(f, quad.finite(-half_pi, 0.0), tol, diag, "I(-)") \
        + _integrate(f, quad.finite(0.0, half_pi), tol, diag, "I(+)")
    return v.real, v.imag, diag


def quad_J(a: float, t: float, tol: float = 1e-13,
           diag: Optional[_Diag] = None) -> tuple[float, float, _Diag]:
    """Real half-line integrals (J, J_d) for U(a,-x), U'(a,-x), x >= 0."""
    if a <= 0.0:
        raise ValueError("quad_J requires a > 0")
    diag = diag if diag is not None else _Diag()
    s1 = math.hypot(t, 1.0)
    w0 = t + s1

    def f(u: float) -> complex:
        psi = 0.5 * (w0 * u) ** 2 - ln1p_minus(u)
        e = math.exp(-a * psi) if a * psi < 745.0 else 0.0
        jg = e / math.sqrt(1.0 + u)
        return complex(jg, (s1 + w0 * u) * jg)

    scale = max(1e-3, min(1.0, 1.0 / (w0 * math.sqrt(a))))
    v = _integrate(f, quad.finite(-1.0, 0.0), tol, diag, "J(-)") \
        + _integrate(f, quad.half_line(0.0, scale), tol, diag, "J(+)")
    return v.real, v.imag, diag


def u_pos_bundle(a: float, x: float, tol: float = 1e-13) -> UVBundle:
    """U, V and derivatives at +-|x| for a > 0, from one I/J quadruple."""
    if a <= 0.0:
        raise ValueError("u_pos_bundle requires a > 0")
    t = abs(x) / (2.0 * math.sqrt(a))
    diag = _Diag()
    i_val, id_val, _ = quad_I(a, t, tol, diag)
    j_val, jd_val, _ = quad_J(a, t, tol, diag)

    s1 = math.hypot(t, 1.0)
    w0 = t + s1
    xt = xi_tilde(t)
    ln_gam_half = float(sc.gammaln(a + 0.5))
    ln_ci = 0.25 * math.log(a) - 0.5 * _LN_2PI - ln_gamma_aux(a) - 2.0 * a * xt
    ln_cj = 0.25 * math.log(a) + 0.5 * math.log(w0) + ln_gamma_aux(a) \
        + 2.0 * a * xt - ln_gam_half
    half_ln_a = 0.5 * math.log(a)

    u_p = ScaledReal.from_log(ln_ci) * i_val
    up_p = -(ScaledReal.from_log(ln_ci + half_ln_a) * id_val)
    u_m = ScaledReal.from_log(ln_cj) * j_val
    up_m = -(ScaledReal.from_log(ln_cj + half_ln_a) * jd_val)

    spa = sinpi(a)
    conn = ScaledReal.from_log(ln_gam_half - math.log(math.pi))
    v_p = conn * (spa * u_p + u_m)
    v_m = conn * (spa * u_m + u_p)
    vp_p = conn * (spa * up_p - up_m)
    vp_m = conn * (spa * up_m - up_p)

    target = 2.0 * math.pi / (a * math.sqrt(w0))
    resid = abs(i_val * jd_val + id_val * j_val - target) / target

    def mk(u, up, v, vp):
        return UVResult(u, up, v, vp, Regime.U_POS, resid,
                        diag.evaluations, diag.err)

    return UVBundle(plus=mk(u_p, up_p, v_p, vp_p),
                    minus=mk(u_m, up_m, v_m, vp_m))


def u_pos_assemble(a: float, x: float, tol: float = 1e-13) -> UVResult:
    """U(a,x), V(a,x) and derivatives for a > 0 (either sign of x)."""
    return u_pos_bundle(a, x, tol).side(x)


# =========================================================================== #
# a < 0, |t| < 1: theta-path kernels and assembly
# =========================================================================== #

def kernels_uneg_mid(theta: float, t: float
                     ) -> tuple[float, float, float, float, float]:
    """(psi, g1, g2, h1, h2) on the middle-band descent path, 0 < t < 1.

    psi >= 0 on the path with its zero at theta = asin(t); the grouped form
    (r-1)^2/2 - ln1p_minus(r-1) - (r sin(theta) - t)^2 is exact algebra on
    the closed-form contour and free of leading-digit cancellation.
    """
    r, dr, _sigma = r_uneg_mid(theta, t)
    rho = r - 1.0
    psi = 0.5 * rho * rho - ln1p_minus(rho) - (r * math.sin(theta) - t) ** 2
    sq = math.sqrt(r)
    ch, sh = math.cos(0.5 * theta), math.sin(0.5 * theta)
    g1 = (-dr * ch + r * sh) / sq
    g2 = (r * ch + dr * sh) / sq
    st, ct = math.sin(theta), math.cos(theta)
    h1 = (t - r * st) * g1 + r * ct * g2
    h2 = (t - r * st) * g2 - r * ct * g1
    return psi, g1, g2, h1, h2


def _gh_mid_theta(a: float, t: float, tol: float, diag: _Diag
                  ) -> tuple[float, float, float, float]:
    """G1, G2, H1, H2 over (0, theta0) through the saddle at asin(t)."""
    th0 = theta0_mid(t)
    ths = math.asin(t)

    def fg(theta: float) -> complex:
        psi, g1, g2, _h1, _h2 = kernels_uneg_mid(theta, t)
        e = math.exp(-a * psi) if a * psi < 745.0 else 0.0
        return complex(e * g1, e * g2)

    def fh(theta: float) -> complex:
        psi, _g1, _g2, h1, h2 = kernels_uneg_mid(theta, t)
        e = math.exp(-a * psi) if a * psi < 745.0 else 0.0
        return complex(e * h1, e * h2)

    gsum = _integrate(fg, quad.finite(0.0, ths), tol, diag, "G(0,s)") \
        + _integrate(fg, quad.finite(ths, th0), tol, diag, "G(s,0)")
    hsum = _integrate(fh, quad.finite(0.0, ths), tol, diag, "H(0,s)") \
        + _integrate(fh, quad.finite(ths, th0), tol, diag, "H(s,0)")
    return gsum.real, gsum.imag, hsum.real, hsum.imag


def _gh_mid_upath(a: float, t: float, tol: float, diag: _Diag
                  ) -> tuple[float, float, float, float]:
    """G_j, H_j for small |t| from the slope-matched path v(u).

    The theta-interval collapses like 2t as t -> 0, so the contour is
    integrated in u with the full complex integrand; the path is not
    exactly steepest-descent but passes through the saddle with matched
    slope, leaving only mild bounded oscillation.
    """
    up = math.sqrt((1.0 - t) * (1.0 + t))
    up2 = up * up
    eta = eta_mid(t)
    # phi(w_+) from the closed form (exact), not from the complex expression
    phi_saddle = complex(0.5 + t * t, 2.0 * (eta - 0.25 * math.pi))

    def point(u: float) -> tuple[complex, complex]:
        denom = u + up2
        v = u * t * (1.0 + up) / denom
        dv = t * (1.0 + up) * up2 / (denom * denom)
        return complex(u, v), complex(1.0, dv)

    def fg(u: float) -> complex:
        w, dw = point(u)
        phi = 0.5 * w * w - 2.0j * t * w - cmath.log(w)
        ex = -a * (phi - phi_saddle)
        if ex.real < -745.0:
            return 0j
        return cmath.exp(ex) * dw / cmath.sqrt(w)

    def fh(u: float) -> complex:
        w, dw = point(u)
        phi = 0.5 * w * w - 2.0j * t * w - cmath.log(w)
        ex = -a * (phi - phi_saddle)
        if ex.real < -745.0:
            return 0j
        return cmath.exp(ex) * (t + 1j * w) * dw / cmath.sqrt(w)

    scale = max(1e-3, min(1.0, 1.0 / math.sqrt(a)))
    gc = _integrate(fg, quad.finite(0.0, up), tol, diag, "Gu(0,s)") \
        + _integrate(fg, quad.half_line(up, scale), tol, diag, "Gu(s,inf)")
    hc = _integrate(fh, quad.finite(0.0, up), tol, diag, "Hu(0,s)") \
        + _integrate(fh, quad.half_line(up, scale), tol, diag, "Hu(s,inf)")
    # contour integral equals G1 - i G2 (and H1 - i H2)
    return gc.real, -gc.imag, hc.real, -hc.imag


def _gh_near1_legs(a: float, t: float, tol: float, diag: _Diag
                   ) -> tuple[float, float, float, float]:
    """G_j, H_j near the turning point from the two-leg contour.

    Leg 1 descends the radial segment from the saddle to the origin
    (parameter p in (0,1), measure (1-p)^{-1/2} dp); leg 2 runs from the
    saddle horizontally to +infinity.  Both kernels keep their bounded
    oscillating factors inside the integrand, so nothing degenerates as
    t -> 1.
    """
    up = math.sqrt((1.0 - t) * (1.0 + t))
    tau = math.asin(t)

    def leg1(u_kernel: bool) -> Callable[[float], complex]:
        def f(p: float) -> complex:
            psi_r = 0.5 * p * p * (1.0 - 2.0 * t * t) - ln1p_minus(-p)
            if a * psi_r > 745.0:
                return 0j
            amp = math.exp(-a * psi_r) / math.sqrt(1.0 - p)
            phase = 0.5 * tau - a * (p * p * t * up)
            c = cmath.exp(1j * phase)
            if u_kernel:
                c *= complex(t * p, up * (1.0 - p))
            return amp * c
        return f

    def leg2(u_kernel: bool) -> Callable[[float], complex]:
        def f(u: float) -> complex:
            z = u * (2.0 * up + u)
            psi_r = -0.5 * ln1p_minus(z)
            if a * psi_r > 745.0:
                return 0j
            big = 1.0 + u * up
            x_at = u * t / big
            psi_i = -u * u * t * up / big + atan_minus(x_at)
            amp = math.exp(-a * psi_r) * (1.0 + z) ** -0.25
            phase = -0.5 * tau - a * psi_i + 0.5 * math.atan(x_at)
            c = cmath.exp(1j * phase)
            if u_kernel:
                c *= 1j * (u + up)
            return amp * c
        return f

    scale = max(1e-3, min(1.0, 1.0 / (math.sqrt(a) * max(up, 0.05))))
    gc = _integrate(leg1(False), quad.finite(0.0, 1.0), tol, diag, "G~1") \
        + _integrate(leg2(False), quad.half_line(0.0, scale), tol, diag, "G~2")
    hc = _integrate(leg1(True), quad.finite(0.0, 1.0), tol, diag, "H~1") \
        + _integrate(leg2(True), quad.half_line(0.0, scale), tol, diag, "H~2")
    # kernels encode g1 - i g2 (and h1 - i h2)
    return gc.real, -gc.imag, hc.real, -hc.imag


def _assemble_mid(a: float, tau: float, regime: Regime,
                  g1: float, g2: float, h1: float, h2: float,
                  diag: _Diag) -> UVBundle:
    """Build both arguments' U, V from middle-band integrals at tau >= 0."""
    eta = eta_mid(tau)
    lam = 2.0 * a * eta + 0.25 * math.pi
    sl, cl = math.sin(lam), math.cos(lam)
    spa, cpa = sinpi(a), cospi(a)
    # lambda at the reflected argument is pi*a + pi/2 - lambda
    sl_m = spa * sl + cpa * cl
    cl_m = cpa * sl - spa * cl
    ln_c = math.log(_SQRT_2_PI) + 0.25 * math.log(a) + ln_gamma_aux(a)
    ln_gam_half = float(sc.gammaln(a + 0.5))
    half_ln_a = 0.5 * math.log(a)

    resid = abs(h1 * g2 - g1 * h2 - math.pi / a * gamma_star(a)) * a / math.pi

    def build(s_l, c_l, G1, G2, H1, H2):
        u = ScaledReal.from_log(ln_c) * (s_l * G1 + c_l * G2)
        upr = ScaledReal.from_log(ln_c + half_ln_a) * (s_l * H1 + c_l * H2)
        v = ScaledReal.from_log(ln_c - ln_gam_half) * (c_l * G1 - s_l * G2)
        vpr = ScaledReal.from_log(ln_c + half_ln_a - ln_gam_half) \
            * (c_l * H1 - s_l * H2)
        return UVResult(u, upr, v, vpr, regime, resid,
                        diag.evaluations, diag.err)

    plus = build(sl, cl, g1, g2, h1, h2)
    minus = build(sl_m, cl_m, g1, -g2, -h1, h2)
    return UVBundle(plus=plus, minus=minus)


def uv_neg_mid_bundle(a: float, tau: float, tol: float = 1e-13) -> UVBundle:
    """U(-a, +-x), V(-a, +-x) for 0 <= tau < 1 via the middle-band path."""
    if a <= 0.0:
        raise ValueError("uv_neg_mid requires a > 0")
    if not 0.0 <= tau < 1.0:
        raise ValueError(f"middle band needs 0 <= |t| < 1, got {tau!r}")
    diag = _Diag()
    if tau >= T_NEAR1:
        g1, g2, h1, h2 = _gh_near1_legs(a, tau, tol, diag)
        regime = Regime.U_NEG_NEAR1
    elif tau < T_SMALL:
        g1, g2, h1, h2 = _gh_mid_upath(a, tau, tol, diag)
        regime = Regime.U_NEG_MID
    else:
        g1, g2, h1, h2 = _gh_mid_theta(a, tau, tol, diag)
        regime = Regime.U_NEG_MID
    return _assemble_mid(a, tau, regime, g1, g2, h1, h2, diag)


def uv_neg_mid(a: float, t: float, tol: float = 1e-13) -> UVResult:
    """U(-a, x), V(-a, x) and derivatives at x = 2 t sqrt(a), |t| < T_NEAR1."""
    b = uv_neg_mid_bundle(a, abs(t), tol)
    return b.plus if t >= 0.0 else b.minus


def uv_neg_near1(a: float, t: float, tol: float = 1e-13) -> UVResult:
    """Same surface as uv_neg_mid for the band T_NEAR1 <= |t| < 1."""
    if not T_NEAR1 <= abs(t) < 1.0:
        raise ValueError(f"near-1 band needs {T_NEAR1} <= |t| < 1, got {t!r}")
    b = uv_neg_mid_bundle(a, abs(t), tol)
    return b.plus if t >= 0.0 else b.minus


# =========================================================================== #
# a < 0, |t| >= 1: outer band
# =========================================================================== #

@dataclass(frozen=True)
class OuterIntegrals:
    """The exported G/H hextuple of the t >= 1 contour at tau = |t|."""
    g1: float
    g2: float
    g3: float
    h1: float
    h2: float
    h3: float


def kernels_uneg_right(theta: float, t: float
                       ) -> tuple[float, float, float, float, float]:
    """(psi, g1, g2, h1, h2) on the outer-band path, t >= 1."""
    r, dr = r_uneg_right(theta, t)
    rho = r - 1.0
    psi = 0.5 * rho * rho - ln1p_minus(rho) \
        - (r * math.sin(theta) - t) ** 2 - 2.0 * xi_right(t)
    sq = math.sqrt(r)
    cq = math.cos(0.5 * theta + 0.25 * math.pi)
    sq4 = math.sin(0.5 * theta + 0.25 * math.pi)
    g1 = (r * sq4 - dr * cq) / sq
    g2 = -(dr * sq4 + r * cq) / sq
    st, ct = math.sin(theta), math.cos(theta)
    h1 = (t - r * st) * g1 - r * ct * g2
    h2 = r * ct * g1 + (t - r * st) * g2
    return psi, g1, g2, h1, h2


def outer_integrals(a: float, tau: float, tol: float = 1e-13,
                    diag: Optional[_Diag] = None) -> tuple[OuterIntegrals, _Diag]:
    """G1..G3, H1..H3 for the outer band at tau >= 1."""
    if a <= 0.0:
        raise ValueError("outer_integrals requires a > 0")
    if tau < 1.0:
        raise ValueError("outer band needs |t| >= 1")
    diag = diag if diag is not None else _Diag()
    s = math.sqrt((tau - 1.0) * (tau + 1.0))
    r_minus = 1.0 / (tau + s)
    r_plus = tau + s

    def f_theta(kernel_h: bool) -> Callable[[float], complex]:
        def f(theta: float) -> complex:
            psi, g1, g2, h1, h2 = kernels_uneg_right(theta, tau)
            if a * psi > 745.0:
                return 0j
            e = math.exp(-a * psi)
            return complex(e * h1, e * h2) if kernel_h \
                else complex(e * g1, e * g2)
        return f

    def f_v(v: float) -> complex:
        delta = v - r_minus
        z = delta / r_minus
        if z > -0.5:
            phit = 0.5 * delta * delta + ln1p_minus(z)
        else:
            # far from the interior peak; no cancellation in the raw form
            phit = 0.5 * delta * delta + math.log(v / r_minus) - z
        if a * phit < -745.0:
            return 0j
        e = math.exp(a * phit) / math.sqrt(v)
        return complex(e, e * (tau - v))

    half_pi = 0.5 * math.pi
    gv = _integrate(f_theta(False), quad.finite(0.0, half_pi), tol, diag, "Gth")
    hv = _integrate(f_theta(True), quad.finite(0.0, half_pi), tol, diag, "Hth")
    v3 = _integrate(f_v, quad.finite(0.0, r_minus), tol, diag, "G3(0,rm)") \
        + _integrate(f_v, quad.finite(r_minus, r_plus), tol, diag, "G3(rm,rp)")
    return OuterIntegrals(gv.real, gv.imag, v3.real,
                          hv.real, hv.imag, v3.imag), diag


def uv_neg_outer_bundle(a: float, tau: float, tol: float = 1e-13
                        ) -> tuple[UVBundle, OuterIntegrals]:
    """Both arguments' U, V for |t| = tau >= 1 from one hextuple."""
    ints, diag = outer_integrals(a, tau, tol)
    s = math.sqrt((tau - 1.0) * (tau + 1.0))
    xi = xi_right(tau)
    ln_c = math.log(_SQRT_2_PI) + 0.25 * math.log(a) + ln_gamma_aux(a)
    ln_gam_half = float(sc.gammaln(a + 0.5))
    half_ln_a = 0.5 * math.log(a)
    e_m4 = math.exp(-4.0 * a * xi) if 4.0 * a * xi < 745.0 else 0.0
    spa, cpa = sinpi(a), cospi(a)

    resid_target = math.pi / a * gamma_star(a)
    resid = abs(e_m4 * (ints.g1 * ints.h2 - ints.h1 * ints.g2)
                + (ints.g1 * ints.h3 - ints.h1 * ints.g3)
                - resid_target) / resid_target

    def sr(ln: float, val: float) -> ScaledReal:
        return ScaledReal.from_log(ln) * val

    u_p = sr(ln_c - 2.0 * a * xi, ints.g1)
    up_p = sr(ln_c + half_ln_a - 2.0 * a * xi, ints.h1)
    v_p = sr(ln_c + 2.0 * a * xi - ln_gam_half, e_m4 * ints.g2 + ints.g3)
    vp_p = sr(ln_c + half_ln_a + 2.0 * a * xi - ln_gam_half,
              e_m4 * ints.h2 + ints.h3)

    u_m = sr(ln_c - 2.0 * a * xi, cpa * ints.g2 + spa * ints.g1) \
        + sr(ln_c + 2.0 * a * xi, cpa * ints.g3)
    up_m = -(sr(ln_c + half_ln_a - 2.0 * a * xi, cpa * ints.h2 + spa * ints.h1)
             + sr(ln_c + half_ln_a + 2.0 * a * xi, cpa * ints.h3))
    v_m = sr(ln_c - 2.0 * a * xi - ln_gam_half, cpa * ints.g1 - spa * ints.g2) \
        - sr(ln_c + 2.0 * a * xi - ln_gam_half, spa * ints.g3)
    vp_m = -(sr(ln_c + half_ln_a - 2.0 * a * xi - ln_gam_half,
                cpa * ints.h1 - spa * ints.h2)
             - sr(ln_c + half_ln_a + 2.0 * a * xi - ln_gam_half,
                  spa * ints.h3))

    plus = UVResult(u_p, up_p, v_p, vp_p, Regime.U_NEG_RIGHT, resid,
                    diag.evaluations, diag.err)
    minus = UVResult(u_m, up_m, v_m, vp_m, Regime.U_NEG_LEFT, resid,
                     diag.evaluations, diag.err)
    return UVBundle(plus=plus, minus=minus), ints


def uv_neg_right(a: float, t: float, tol: float = 1e-13) -> UVResult:
    """U(-a,x), V(-a,x) and derivatives for t >= 1."""
    if t < 1.0:
        raise ValueError("uv_neg_right requires t >= 1")
    bundle, _ = uv_neg_outer_bundle(a, t, tol)
    return bundle.plus


def uv_neg_left(a: float, t: float, tol: float = 1e-13) -> UVResult:
    """U(-a,x), V(-a,x) and derivatives for t <= -1 (reflection assembly)."""
    if t > -1.0:
        raise ValueError("uv_neg_left requires t <= -1")
    bundle, _ = uv_neg_outer_bundle(a, abs(t), tol)
    return bundle.minus


def uv_neg_bundle(a: float, t: float, tol: float = 1e-13) -> UVBundle:
    """Dispatch the a<0 regimes on tau = |t|; bundle carries both signs."""
    tau = abs(t)
    if tau < 1.0:
        return uv_neg_mid_bundle(a, tau, tol)
    bundle, _ = uv_neg_outer_bundle(a, tau, tol)
    return bundle
