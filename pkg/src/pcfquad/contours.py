"""Saddle-point geometry and contour parameterizations for every regime.

This module is the single home of the turning-point variables (xi, xi_tilde,
eta, theta0, r_minus/r_plus, saddle positions) and of the descent-path
parameterizations r(theta), v(u), u(v) used by the integral assemblies.

Numerical policy
----------------
Closed-form paths are evaluated from their printed solutions away from
saddle points.  Within a small parameter window around each saddle the
0/0 implicit derivatives are replaced by a local branch model whose slope
and curvature come from the exact second- and third-order partials of the
defining level equation (see ``branch_curvature``).  All quantities that
cancel near turning points (xi, eta near t = 1, theta*cot(theta) near 0)
are built from the stable kernels in ``scalar``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional

from .scalar import (asin_minus, asinh_minus, theta_cot_theta,
                     theta_cot_theta_m1)

_SQRT2 = math.sqrt(2.0)
_E4 = cmath.exp(-0.25j * math.pi)   # e^{-i pi/4}

# parameter half-width of the local saddle models on closed-form paths
_DELTA_LOCAL = 1e-4


class TraceError(RuntimeError):
    """A numerically traced path failed to converge or lost its branch."""


class Regime(Enum):
    U_POS = "U_POS"
    U_NEG_MID = "U_NEG_MID"
    U_NEG_NEAR1 = "U_NEG_NEAR1"
    U_NEG_RIGHT = "U_NEG_RIGHT"
    U_NEG_LEFT = "U_NEG_LEFT"
    W_NEG = "W_NEG"
    W_POS_RIGHT = "W_POS_RIGHT"
    W_POS_MID = "W_POS_MID"
    SERIES = "SERIES"


# --------------------------------------------------------------------------- #
# turning-point variables, cancellation-safe
# --------------------------------------------------------------------------- #

def xi_tilde(t: float) -> float:
    """(1/2)[t sqrt(t^2+1) + ln(t + sqrt(t^2+1))]; odd, zero at 0."""
    return 0.5 * (t * math.hypot(t, 1.0) + math.asinh(t))


def dxi_tilde(t: float) -> float:
    return math.hypot(t, 1.0)


def xi_right(t: float) -> float:
    """(1/2)[t sqrt(t^2-1) - ln(t + sqrt(t^2-1))] for t >= 1; zero at 1.

    Grouped as s^3/(t+1) + (s - asinh s) so the O((t-1)^{3/2}) leading
    behaviour keeps full accuracy at the turning point.
    """
    if t < 1.0:
        raise ValueError(f"xi_right requires t >= 1, got {t!r}")
    s = math.sqrt((t - 1.0) * (t + 1.0))
    return 0.5 * (s * s * s / (t + 1.0) - asinh_minus(s))


def dxi_right(t: float) -> float:
    return math.sqrt((t - 1.0) * (t + 1.0))


def eta_mid(t: float) -> float:
    """(1/2)(arccos t - t sqrt(1-t^2)) for |t| <= 1.

    eta(1) = 0, eta(0) = pi/4, eta(-1) = pi/2; near t = 1 grouped as
    (s^3/(1+t) + (asin s - s))/2 with s = sqrt(1-t^2).
    """
    if abs(t) > 1.0:
        raise ValueError(f"eta_mid requires |t| <= 1, got {t!r}")
    if t < 0.0:
        return 0.5 * math.pi - eta_mid(-t)
    s = math.sqrt((1.0 - t) * (1.0 + t))
    return 0.5 * (s * s * s / (1.0 + t) + asin_minus(s))


def theta0_mid(t: float) -> float:
    """theta0 = pi/2 - 2 eta(t) = asin t + t sqrt(1-t^2), stable near t = 0."""
    if abs(t) > 1.0:
        raise ValueError(f"theta0_mid requires |t| <= 1, got {t!r}")
    s = math.sqrt((1.0 - t) * (1.0 + t))
    return math.asin(t) + t * s


# --------------------------------------------------------------------------- #
# saddle data bundle
# --------------------------------------------------------------------------- #

@dataclass(frozen=True)
class SaddleData:
    """Geometric bundle for one (regime, t) cell."""

    regime: Regime
    t: float
    w0: Optional[float] = None            # U_POS real saddle t + sqrt(t^2+1)
    w_plus: Optional[complex] = None
    w_minus: Optional[complex] = None
    xi_tilde: Optional[float] = None
    xi: Optional[float] = None
    eta: Optional[float] = None
    theta0: Optional[float] = None
    theta_saddle: Optional[float] = None  # ph w_+ on the U_NEG_MID path
    r_minus: Optional[float] = None
    r_plus: Optional[float] = None

    def lam(self, a: float) -> float:
        """Oscillation phase 2*a*eta + pi/4 of the a<0 middle band."""
        if self.eta is None:
            raise ValueError("lam() needs a regime with eta")
        return 2.0 * a * self.eta + 0.25 * math.pi


def geometry(regime: Regime, t: float) -> SaddleData:
    """Populate the saddle/turning-point bundle for one regime."""
    if regime is Regime.U_POS:
        if t < 0.0:
            raise ValueError("U_POS geometry requires t >= 0")
        return SaddleData(regime, t, w0=t + math.hypot(t, 1.0),
                          xi_tilde=xi_tilde(t))
    if regime in (Regime.U_NEG_MID, Regime.U_NEG_NEAR1):
        if abs(t) > 1.0:
            raise ValueError("middle-band geometry requires |t| <= 1")
        up = math.sqrt((1.0 - t) * (1.0 + t))
        return SaddleData(regime, t, w_plus=complex(up, t),
                          eta=eta_mid(t), theta0=theta0_mid(t),
                          theta_saddle=math.asin(t))
    if regime in (Regime.U_NEG_RIGHT, Regime.U_NEG_LEFT):
        ta = abs(t)
        if ta < 1.0:
            raise ValueError("outer-band geometry requires |t| >= 1")
        s = math.sqrt((ta - 1.0) * (ta + 1.0))
        rp = ta + s
        return SaddleData(regime, t, xi=xi_right(ta),
                          r_minus=1.0 / rp, r_plus=rp,
                          w_plus=complex(0.0, rp), w_minus=complex(0.0, 1.0 / rp))
    if regime is Regime.W_NEG:
        if t < 0.0:
            raise ValueError("W_NEG geometry requires t >= 0")
        m = t + math.hypot(t, 1.0)
        return SaddleData(regime, t, w_plus=_E4 * m, xi_tilde=xi_tilde(t))
    if regime is Regime.W_POS_RIGHT:
        if t < 1.0:
            raise ValueError("W_POS_RIGHT geometry requires t >= 1")
        s = math.sqrt((t - 1.0) * (t + 1.0))
        m = t + s
        return SaddleData(regime, t, w_plus=_E4 * m, w_minus=_E4 / m,
                          xi=xi_right(t))
    if regime is Regime.W_POS_MID:
        if abs(t) > 1.0:
            raise ValueError("W_POS_MID geometry requires |t| <= 1")
        th = math.acos(t)
        return SaddleData(regime, t, eta=eta_mid(t),
                          w_plus=cmath.exp(1j * (th - 0.25 * math.pi)),
                          w_minus=cmath.exp(-1j * (th + 0.25 * math.pi)),
                          theta_saddle=th)
    raise ValueError(f"no geometry for regime {regime!r}")


# --------------------------------------------------------------------------- #
# generic saddle-branch local model
# --------------------------------------------------------------------------- #

def branch_slopes(hxx: float, hxy: float, hyy: float) -> tuple[float, float]:
    """Slopes dx/dy of the two level-curve branches through a saddle of H."""
    # roots of hxx s^2 + 2 hxy s + hyy = 0
    if hxx == 0.0:
        if hxy == 0.0:
            raise ValueError("degenerate saddle: vanishing Hessian")
        return (-hyy / (2.0 * hxy), math.inf)
    disc = hxy * hxy - hxx * hyy
    if disc < 0.0:
        raise ValueError("not a saddle: negative Hessian discriminant")
    q = math.sqrt(disc)
    return ((-hxy + q) / hxx, (-hxy - q) / hxx)


def branch_curvature(hxx: float, hxy: float, hyy: float,
                     hxxx: float, hxxy: float, hxyy: float, hyyy: float,
                     slope: float) -> float:
    """d2x/dy2 of the branch x(y) with slope dx/dy through a saddle of H."""
    denom = 3.0 * (hxx * slope + hxy)
    if denom == 0.0:
        raise ValueError("coincident branch slopes; curvature undefined")
    return -(hxxx * slope ** 3 + 3.0 * hxxy * slope * slope
             + 3.0 * hxyy * slope + hyyy) / denom


# --------------------------------------------------------------------------- #
# closed-form contours
# --------------------------------------------------------------------------- #

def r_upos(theta: float, t: float) -> tuple[float, float]:
    """Descent path r(theta) through the a>0 saddle, with dr/dtheta.

    Defined by (1/2) r^2 sin 2theta - 2 t r sin theta - theta = 0 on
    |theta| < pi/2; r(0) is the saddle t + sqrt(t^2+1).
    """
    if not abs(theta) < 0.5 * math.pi:
        raise ValueError(f"r_upos requires |theta| < pi/2, got {theta!r}")
    if t < 0.0:
        raise ValueError(f"r_upos requires t >= 0, got {t!r}")
    s1 = math.hypot(t, 1.0)
    w0 = t + s1
    c = math.cos(theta)
    sq = math.sqrt(t * t + theta_cot_theta(theta))
    r = (t + sq) / c
    if abs(theta) < _DELTA_LOCAL:
        # even branch through (w0, 0): dr/dtheta = s2 * theta + O(theta^3)
        s2 = w0 * (2.0 * w0 - t) / (3.0 * s1)
        return r, s2 * theta
    fr = r * math.sin(2.0 * theta) - 2.0 * t * math.sin(theta)
    fth = r * r * math.cos(2.0 * theta) - 2.0 * t * r * c - 1.0
    return r, -fth / fr


def _mid_partials(r: float, th: float, t: float):
    s2t, c2t = math.sin(2.0 * th), math.cos(2.0 * th)
    st, ct = math.sin(th), math.cos(th)
    return dict(
        hrr=s2t,
        hrt=2.0 * r * c2t + 2.0 * t * st,
        htt=-2.0 * r * r * s2t + 2.0 * t * r * ct,
        hrrr=0.0,
        hrrt=2.0 * c2t,
        hrtt=-4.0 * r * s2t + 2.0 * t * ct,
        httt=-4.0 * r * r * c2t - 2.0 * t * r * st,
    )


def r_uneg_mid(theta: float, t: float) -> tuple[float, float, int]:
    """Path r(theta) for the a<0 middle band, 0 <= theta <= theta0, 0 < t < 1.

    Returns (r, dr/dtheta, sigma); sigma is +1 on the saddle side toward
    theta = 0 and -1 beyond ph w_+, matching the sign of the square root in
    the closed-form solution.
    """
    if not 0.0 < t < 1.0:
        raise ValueError(f"r_uneg_mid requires 0 < t < 1, got t={t!r}")
    th0 = theta0_mid(t)
    if not 0.0 <= theta <= th0:
        raise ValueError(f"theta={theta!r} outside [0, theta0={th0!r}]")
    ths = math.asin(t)
    c = math.sqrt((1.0 - t) * (1.0 + t))
    sigma = 1 if theta <= ths else -1
    d = theta - ths
    slope = -(1.0 + c) / t
    # the third-order branch term is large here (grows like t^-3), so the
    # quadratic model gets a narrow window; outside it the implicit ratio's
    # eps/d^2 noise integrates to < 1e-12
    if abs(d) < 1e-5:
        p = _mid_partials(1.0, ths, t)
        curv = branch_curvature(p["hrr"], p["hrt"], p["htt"], p["hrrr"],
                                p["hrrt"], p["hrtt"], p["httt"], slope)
        r = 1.0 + slope * d + 0.5 * curv * d * d
        return r, slope + curv * d, sigma
    st, ct = math.sin(theta), math.cos(theta)
    disc = t * t * ct * ct + st * ct * (theta - th0)
    if disc < 0.0:
        disc = 0.0
    r = (t * ct + sigma * math.sqrt(disc)) / (st * ct)
    fr = r * math.sin(2.0 * theta) - 2.0 * t * ct
    fth = r * r * math.cos(2.0 * theta) + 2.0 * t * r * st - 1.0
    return r, -fth / fr, sigma


def r_uneg_right(theta: float, t: float) -> tuple[float, float]:
    """Path r(theta) for the a<0 outer band (t >= 1), 0 < theta <= pi/2.

    The saddle sits at the endpoint theta = pi/2 where the closed form is
    0/0; a series in beta = pi/2 - theta supplies r and dr/dtheta there.
    """
    if t < 1.0:
        raise ValueError(f"r_uneg_right requires t >= 1, got {t!r}")
    if not 0.0 < theta <= 0.5 * math.pi:
        raise ValueError(f"theta={theta!r} outside (0, pi/2]")
    s = math.sqrt((t - 1.0) * (t + 1.0))
    rp = t + s
    beta = 0.5 * math.pi - theta
    # local window shrinks with s: the branch expansion radius is O(s)
    delta = max(1e-9, min(1e-2, 1e-3 * s)) if s > 0.0 else 1e-9
    if beta < delta or s == 0.0:
        if s == 0.0:
            # merged saddles at t = 1: r = 1 + beta/sqrt(3) + O(beta^2)
            inv = 1.0 / math.sqrt(3.0)
            return 1.0 + beta * inv, -inv
        c2 = rp * (2.0 * rp - t) / (6.0 * s)
        c4 = (c2 * ((4.0 * rp - t) / 3.0) - c2 * c2
              - (2.0 / 15.0) * rp * rp + t * rp / 60.0) / (2.0 * s)
        r = rp + c2 * beta * beta + c4 * beta ** 4
        return r, -(2.0 * c2 * beta + 4.0 * c4 * beta ** 3)
    st, ct = math.sin(theta), math.cos(theta)
    disc = t * t * ct * ct + st * ct * (theta - 0.5 * math.pi)
    if disc < 0.0:
        disc = 0.0
    r = (t * ct + math.sqrt(disc)) / (st * ct)
    fr = r * math.sin(2.0 * theta) - 2.0 * t * ct
    fth = r * r * math.cos(2.0 * theta) + 2.0 * t * r * st - 1.0
    return r, -fth / fr


def approx_path_v_of_u(u: float, t: float) -> tuple[float, float]:
    """Slope-matched approximate descent path v(u) for the middle band.

    v = u t (1 + u_+) / (u + u_+^2) with u_+ = sqrt(1-t^2); runs through the
    saddle u_+ + i t with the descent slope t/(1+u_+).  Returns (v, dv/du).
    """
    if u < 0.0:
        raise ValueError(f"approx_path_v_of_u requires u >= 0, got {u!r}")
    up = math.sqrt((1.0 - t) * (1.0 + t))
    denom = u + up * up
    v = u * t * (1.0 + up) / denom
    dv = t * (1.0 + up) * up * up / (denom * denom)
    return v, dv


def theta_of_r_wneg(r: float, t: float) -> float:
    """Angle theta(r) on the exact W a<0 descent contour through w_+.

    Solves the quadratic for sin(theta - pi/4) in the defining level
    equation; valid on the branch through the saddle (theta-pi/4 in
    [-pi/2, pi/2]).
    """
    if r <= 0.0:
        raise ValueError(f"theta_of_r_wneg requires r > 0, got {r!r}")
    target = t * t + 2.0 * xi_tilde(t) - 0.5
    disc = t * t + 0.5 * r * r + math.log(r) - target
    if disc < 0.0:
        raise ValueError(f"r={r!r} is off the contour (negative discriminant)")
    y = (-t + math.sqrt(disc)) / r
    if abs(y) > 1.0:
        raise ValueError(f"r={r!r} is outside the traced branch")
    return 0.25 * math.pi + math.asin(y)


# --------------------------------------------------------------------------- #
# level functions (for residual checks and dumps)
# --------------------------------------------------------------------------- #

def im_phi_upos(r: float, theta: float, t: float) -> float:
    return 0.5 * r * r * math.sin(2.0 * theta) \
        - 2.0 * t * r * math.sin(theta) - theta


def im_phi_uneg(r: float, theta: float, t: float) -> float:
    return 0.5 * r * r * math.sin(2.0 * theta) \
        - 2.0 * t * r * math.cos(theta) - theta


def im_phi_wneg(r: float, theta: float, t: float) -> float:
    return 0.5 * r * r * math.sin(2.0 * theta) \
        - 2.0 * t * r * math.sin(theta - 0.25 * math.pi) + math.log(r)


def im_phi_wpos(u: float, v: float, t: float) -> float:
    return u * v - _SQRT2 * t * (v - u) - 0.5 * math.log(u * u + v * v)


@dataclass(frozen=True)
class ContourPoint:
    """One sampled point of a traced or closed-form contour."""

    param: float
    u: float
    v: float
    r: float
    drdtheta: float
    on_path_residual: float


# --------------------------------------------------------------------------- #
# W a>0 middle band: traced two-saddle path
# --------------------------------------------------------------------------- #

class WpmPath:
    """Steepest-descent level path Im phi = 1/2 + t^2 through both saddles.

    The path runs from -i*inf up through w_-, along an arc to w_+, and on to
    +i*inf.  It is traced once per instance by tangent-predictor /
    Newton-corrector continuation; the marched points split the path into
    pieces on which either u or v is a well-conditioned parameter (the
    preferred coordinate switches where the tangent crosses the diagonals),
    so no piece ever needs a singular parameterization.
    """

    STEP = 0.02          # base arclength step of the march
    MAX_TURN = 0.08      # tangent rotation per step before halving
    NEWTON_TOL = 5e-16   # drive |H| to the rounding floor: slope noise near
    SADDLE_WINDOW = 1e-4  # saddles scales like |H|/d^2, so the floor matters

    def __init__(self, t: float, a_hint: float = 1.0):
        if not abs(t) < 1.0:
            raise ValueError(f"WpmPath requires |t| < 1, got {t!r}")
        self.t = t
        self.target = 0.5 + t * t
        th = math.acos(t)
        self.theta = th
        self.eta = eta_mid(t)
        self.w_plus = cmath.exp(1j * (th - 0.25 * math.pi))
        self.w_minus = cmath.exp(-1j * (th + 0.25 * math.pi))
        self.v_plus = self.w_plus.imag
        self.v_minus = self.w_minus.imag
        # decay window: quadratic growth of Re psi gives |integrand| < eps^2
        # at |v - v_saddle| ~ sqrt(145/a)
        self.v_max = self.v_plus + math.sqrt(145.0 / max(a_hint, 0.25)) + 2.0
        self.v_min = self.v_minus - math.sqrt(145.0 / max(a_hint, 0.25)) - 2.0
        self._trace()

    # ---- level function and derivatives ---- #

    def _dphi(self, w: complex) -> complex:
        return w - 2.0 * self.t * _E4 - 1j / w

    def _h(self, u: float, v: float) -> float:
        return im_phi_wpos(u, v, self.t) - self.target

    def _grad(self, u: float, v: float) -> tuple[float, float]:
        d = self._dphi(complex(u, v))
        return d.imag, d.real          # (H_u, H_v)

    def _tangent(self, u: float, v: float) -> complex:
        hu, hv = self._grad(u, v)
        n = math.hypot(hu, hv)
        if n == 0.0:
            raise TraceError("tangent requested at a saddle point")
        return complex(-hv / n, hu / n)

    def _saddle_tangents(self, which: str) -> dict[str, complex]:
        """Unit tangents of the arc/leg branches at a saddle."""
        th = self.theta
        if which == "plus":
            arc = cmath.exp(1j * (0.5 * th - 0.25 * math.pi + math.pi))
            leg = cmath.exp(1j * (0.5 * th + 0.25 * math.pi))
        else:
            arc = cmath.exp(1j * (0.25 * math.pi - 0.5 * th))
            leg = cmath.exp(1j * (0.75 * math.pi - 0.5 * th + math.pi))
        return {"arc": arc, "leg": leg}

    # ---- corrector ---- #

    def _polish(self, u: float, v: float, max_iter: int = 24) -> tuple[float, float]:
        """Newton along the gradient direction onto H = 0 (to rounding floor)."""
        tol = self.NEWTON_TOL * (1.0 + abs(self.target))
        prev = math.inf
        for _ in range(max_iter):
            h = self._h(u, v)
            ah = abs(h)
            if ah <= tol:
                return u, v
            if ah >= 0.5 * prev:
                # stalled at the evaluation floor; accept if plausibly there
                if ah <= 2e4 * tol:
                    return u, v
                raise TraceError(f"Newton corrector stalled near ({u!r}, {v!r})")
            prev = ah
            hu, hv = self._grad(u, v)
            n2 = hu * hu + hv * hv
            if n2 == 0.0:
                raise TraceError("Newton corrector hit a stationary point")
            u -= h * hu / n2
            v -= h * hv / n2
        raise TraceError(f"Newton corrector did not converge near ({u!r}, {v!r})")

    # ---- the march ---- #

    def _march(self, start: complex, direction: complex,
               stop: Callable[[complex], bool],
               other_saddle: Optional[complex]) -> list[complex]:
        """Continuation from a saddle until ``stop`` accepts the point."""
        pts = [start]
        # first step leaves the saddle along the known branch tangent;
        # near-merged saddles (|t| -> 1) force a proportionally finer step
        sep = abs(self.w_plus - self.w_minus)
        step = min(self.STEP, sep / 8.0) if sep > 0.0 else self.STEP
        w = start + direction * step
        u, v = self._polish(w.real, w.imag)
        w = complex(u, v)
        pts.append(w)
        tang = self._tangent(u, v)
        if (tang.real * direction.real + tang.imag * direction.imag) < 0.0:
            tang = -tang
        for _ in range(20000):
            if stop(w):
                return pts
            if other_saddle is not None and abs(w - other_saddle) < 1.5 * step:
                pts.append(other_saddle)
                return pts
            wn = w + tang * step
            try:
                u, v = self._polish(wn.real, wn.imag)
            except TraceError:
                step *= 0.5
                if step < 1e-6:
                    raise
                continue
            tn = self._tangent(u, v)
            if (tn.real * tang.real + tn.imag * tang.imag) < 0.0:
                tn = -tn
            turn = abs(cmath.phase(tn / tang))
            if turn > self.MAX_TURN and step > 1e-4:
                step *= 0.5
                continue
            w = complex(u, v)
            pts.append(w)
            tang = tn
            if turn < 0.25 * self.MAX_TURN and step < self.STEP:
                step *= 2.0
        raise TraceError("path march failed to terminate")

    def _trace(self) -> None:
        tp = self._saddle_tangents("plus")
        tm = self._saddle_tangents("minus")
        # arc from w_- to w_+ (orientation of increasing path position)
        arc = self._march(self.w_minus, tm["arc"],
                          stop=lambda w: False,
                          other_saddle=self.w_plus)
        if abs(arc[-1] - self.w_plus) > 1e-9:
            raise TraceError("arc march did not reach the second saddle")
        upper = self._march(self.w_plus, tp["leg"],
                            stop=lambda w: w.imag >= self.v_max,
                            other_saddle=None)
        lower = self._march(self.w_minus, tm["leg"],
                            stop=lambda w: w.imag <= self.v_min,
                            other_saddle=None)
        self.arc_points = arc                      # w_- -> w_+
        self.upper_points = upper                  # w_+ -> +i inf
        self.lower_points = lower                  # w_- -> -i inf
        # full path in increasing-v order: lower reversed, arc, upper
        self.path_points = list(reversed(lower)) + arc[1:] + upper[1:]

    # ---- piece decomposition for integration ---- #

    def pieces(self) -> list["_PathPiece"]:
        """Split (lower leg, arc, upper leg) into coordinate-monotone pieces.

        Each piece is parameterized by u or v, whichever keeps |dp/ds|
        bounded below along it, and remembers which saddle normalizes its
        exponent (psi_1 through w_+ for the arc and upper leg, psi_2
        through w_- for the lower leg).
        """
        out: list[_PathPiece] = []
        out.extend(self._split(self.lower_points, "minus", reverse=True))
        out.extend(self._split(self.arc_points, "plus", reverse=False))
        out.extend(self._split(self.upper_points, "plus", reverse=False))
        return out

    def _split(self, pts: list[complex], norm: str, reverse: bool) -> list["_PathPiece"]:
        # orientation: integration follows increasing path position, i.e.
        # from -i inf to +i inf; marched leg lists start at their saddle
        seq = list(reversed(pts)) if reverse else pts
        if len(seq) < 2:
            return []
        prefs = []
        for i, w in enumerate(seq):
            wn = seq[min(i + 1, len(seq) - 1)]
            wp = seq[max(i - 1, 0)]
            d = wn - wp
            prefs.append("u" if abs(d.real) >= abs(d.imag) else "v")
        pieces = []
        start = 0
        for i in range(1, len(seq)):
            if prefs[i] != prefs[start] and i - start >= 2:
                pieces.append((start, i, prefs[start]))
                start = i
        pieces.append((start, len(seq) - 1, prefs[start]))
        out = []
        for i0, i1, coord in pieces:
            if i1 <= i0:
                continue
            out.append(_PathPiece(self, seq[i0:i1 + 1], coord, norm))
        return out

    # ---- public sampling (CLI dumps, tests) ---- #

    def sample(self, n: int) -> list[ContourPoint]:
        """n points along the whole path, ordered by increasing v."""
        if n < 16:
            raise ValueError("need at least 16 samples")
        pts = self.path_points
        take = max(1, len(pts) // n)
        sel = pts[::take]
        if sel[-1] is not pts[-1]:
            sel.append(pts[-1])
        out = []
        prev_v = -math.inf
        for w in sel:
            if w.imag < prev_v - 1e-12:
                raise TraceError("traced path lost v-monotonicity")
            prev_v = w.imag
            res = abs(self._h(w.real, w.imag))
            hu, hv = self._grad(w.real, w.imag)
            slope = math.inf if hu == 0.0 else -hv / hu
            out.append(ContourPoint(param=w.imag, u=w.real, v=w.imag,
                                    r=abs(w), drdtheta=slope,
                                    on_path_residual=res))
        return out


class _PathPiece:
    """One coordinate-monotone section of a WpmPath."""

    def __init__(self, path: WpmPath, pts: list[complex], coord: str, norm: str):
        self.path = path
        self.coord = coord
        self.norm = norm            # "plus" or "minus" exponent normalization
        self.pts = pts
        if coord == "u":
            key = [w.real for w in pts]
        else:
            key = [w.imag for w in pts]
        self.p_start = key[0]
        self.p_end = key[-1]
        ascending = key[-1] >= key[0]
        self._keys = key if ascending else list(reversed(key))
        self._vals = pts if ascending else list(reversed(pts))
        self._ascending = ascending
        # local branch models at saddle endpoints: Newton conditioning dies
        # like 1/d there, the quadratic model takes over inside the window
        self._models = []
        for end, nbr in ((pts[0], pts[min(1, len(pts) - 1)]),
                         (pts[-1], pts[max(len(pts) - 2, 0)])):
            for saddle in (path.w_plus, path.w_minus):
                if abs(end - saddle) < 1e-9:
                    self._models.append(self._end_model(saddle, nbr))

    def _end_model(self, ws: complex, nbr: complex):
        p2 = 1.0 + 1j / (ws * ws)          # phi''
        p3 = -2j / (ws * ws * ws)          # phi'''
        huu, huv, hvv = p2.imag, p2.real, -p2.imag
        huuu, huuv, huvv, hvvv = p3.imag, p3.real, -p3.imag, -p3.real
        d = nbr - ws
        if self.coord == "v":
            want = d.real / d.imag if d.imag != 0.0 else math.inf
            cands = branch_slopes(huu, huv, hvv)
            s1 = min(cands, key=lambda s: abs(s - want))
            s2 = branch_curvature(huu, huv, hvv, huuu, huuv, huvv, hvvv, s1)
            return (ws.imag, ws, s1, s2)
        want = d.imag / d.real if d.real != 0.0 else math.inf
        cands = branch_slopes(hvv, huv, huu)
        s1 = min(cands, key=lambda s: abs(s - want))
        s2 = branch_curvature(hvv, huv, huu, hvvv, huvv, huuv, huuu, s1)
        return (ws.real, ws, s1, s2)

    def _interp(self, p: float) -> complex:
        import bisect
        keys = self._keys
        i = bisect.bisect_left(keys, p)
        if i <= 0:
            return self._vals[0]
        if i >= len(keys):
            return self._vals[-1]
        k0, k1 = keys[i - 1], keys[i]
        w0, w1 = self._vals[i - 1], self._vals[i]
        if k1 == k0:
            return w0
        frac = (p - k0) / (k1 - k0)
        return w0 + (w1 - w0) * frac

    def point(self, p: float) -> tuple[complex, complex]:
        """Exact on-curve point at parameter p, with dw/dp along the path."""
        t = self.path
        for p_s, ws, s1, s2 in self._models:
            d = p - p_s
            if abs(d) < t.SADDLE_WINDOW:
                other = s1 * d + 0.5 * s2 * d * d
                slope = s1 + s2 * d
                if self.coord == "v":
                    return complex(ws.real + other, p), complex(slope, 1.0)
                return complex(p, ws.imag + other), complex(1.0, slope)
        w = self._interp(p)
        tol = t.NEWTON_TOL * (1.0 + abs(t.target))
        # Newton in the complementary coordinate (well-conditioned on piece)
        if self.coord == "u":
            v = w.imag
            prev = math.inf
            for _ in range(40):
                h = t._h(p, v)
                ah = abs(h)
                if ah <= tol or (ah >= 0.5 * prev and ah <= 2e4 * tol):
                    break
                prev = ah
                hu, hv = t._grad(p, v)
                if hv == 0.0:
                    raise TraceError("piece lost conditioning (H_v = 0)")
                v -= h / hv
            else:
                raise TraceError("piece Newton failed")
            hu, hv = t._grad(p, v)
            dw = complex(1.0, 0.0 if hv == 0.0 else -hu / hv)
            return complex(p, v), dw
        u = w.real
        prev = math.inf
        for _ in range(40):
            h = t._h(u, p)
            ah = abs(h)
            if ah <= tol or (ah >= 0.5 * prev and ah <= 2e4 * tol):
                break
            prev = ah
            hu, hv = t._grad(u, p)
            if hu == 0.0:
                raise TraceError("piece lost conditioning (H_u = 0)")
            u -= h / hu
        else:
            raise TraceError("piece Newton failed")
        hu, hv = t._grad(u, p)
        dw = complex(0.0 if hu == 0.0 else -hv / hu, 1.0)
        return complex(u, p), dw


def trace_wpm_path(t: float, samples: int) -> list[ContourPoint]:
    """Sampled v-monotone two-saddle path for the W a>0 middle band."""
    return WpmPath(t).sample(samples)
