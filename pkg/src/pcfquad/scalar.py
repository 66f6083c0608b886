"""Stable elementary kernels and gamma-family auxiliaries.

Everything here is a pure function of its arguments.  These kernels exist
because the contour-integral phase functions cancel catastrophically when
evaluated term by term; each routine below isolates one such difference so
callers can build phase functions from absolutely-accurate pieces.
"""

from __future__ import annotations

import math

import scipy.special as sc

from .scaled import ScaledReal

# Switch point between direct phase evaluation and the asymptotic series for
# the gamma-phase correction rho_star.  At 8 the truncated 5-term series has
# remainder below 1e-14.
A_ASY = 8.0

# Asymptotic series coefficients d_0..d_4 for rho_star.
RHO_STAR_COEFFS = (
    1.0 / 12.0,
    -13.0 / 720.0,
    37.0 / 20160.0,
    -29.0 / 26880.0,
    -1129.0 / 1520640.0,
)

_SERIES_CUT = 0.5       # |u| below this: ln1p_minus by series
_FAST_CUT = 2.0 ** -10  # |u| below this: fixed degree-8 polynomial

# test hook: relative perturbation injected into gamma_aux (selftest
# sensitivity check only; must stay 0.0 in production use)
_GAMMA_AUX_PERTURBATION = 0.0


def set_gamma_perturbation(eps: float) -> None:
    """Install a relative perturbation in gamma_aux (testing hook)."""
    global _GAMMA_AUX_PERTURBATION
    _GAMMA_AUX_PERTURBATION = float(eps)


# --------------------------------------------------------------------------- #
# logarithmic difference kernels
# --------------------------------------------------------------------------- #

def ln1p_minus(u: float) -> float:
    """ln(1+u) - u, accurate for all u > -1 including tiny |u|."""
    if not u > -1.0:
        raise ValueError(f"ln1p_minus requires u > -1, got {u!r}")
    au = abs(u)
    if au < _FAST_CUT:
        # degree-8 alternating Taylor tail of ln(1+u)
        return -u * u * (1.0 / 2.0 - u * (1.0 / 3.0 - u * (1.0 / 4.0 - u * (
            1.0 / 5.0 - u * (1.0 / 6.0 - u * (1.0 / 7.0 - u / 8.0))))))
    if au < _SERIES_CUT:
        # ln(1+u) - u = sum_{k>=2} (-1)^{k+1} u^k / k
        if u == 0.0:
            return 0.0
        p = u * u
        acc = 0.0
        k = 2
        while True:
            term = p / k if (k % 2 == 1) else -p / k
            acc += term
            if abs(term) < 1e-18 * abs(acc) or k > 200:
                return acc
            p *= u
            k += 1
    return math.log1p(u) - u


def cln1p_minus(z: complex) -> complex:
    """Complex ln(1+z) - z with the principal branch, series for small |z|."""
    az = abs(z)
    if az < _SERIES_CUT:
        if z == 0:
            return 0j
        p = z * z
        acc = 0j
        k = 2
        while True:
            term = p / k if (k % 2 == 1) else -p / k
            acc += term
            if abs(term) < 1e-18 * abs(acc) or k > 200:
                return acc
            p *= z
            k += 1
    w = complex(math.log(abs(1.0 + z)), math.atan2(z.imag, 1.0 + z.real))
    return w - z


def theta_cot_theta(theta: float) -> float:
    """theta * cot(theta), even, continuous at 0 with value 1."""
    if not abs(theta) < math.pi:
        raise ValueError(f"theta_cot_theta requires |theta| < pi, got {theta!r}")
    if theta == 0.0:
        return 1.0
    return theta / math.tan(theta)


def theta_cot_theta_m1(theta: float) -> float:
    """theta*cot(theta) - 1, with a series branch so the O(theta^2) leading
    term keeps full absolute accuracy near 0."""
    if not abs(theta) < math.pi:
        raise ValueError(f"theta_cot_theta_m1 requires |theta| < pi, got {theta!r}")
    t2 = theta * theta
    if t2 < 0.0025:  # |theta| < 0.05
        return -t2 * (1.0 / 3.0 + t2 * (1.0 / 45.0 + t2 * (
            2.0 / 945.0 + t2 * (1.0 / 4725.0 + t2 * 2.0 / 93555.0))))
    return theta / math.tan(theta) - 1.0


def asin_minus(s: float) -> float:
    """asin(s) - s for |s| <= 1 (positive for s > 0)."""
    if abs(s) < 0.05:
        s2 = s * s
        # asin series: s + s^3/6 + 3 s^5/40 + 15 s^7/336 + 105 s^9/3456 + ...
        return s * s2 * (1.0 / 6.0 + s2 * (3.0 / 40.0 + s2 * (
            15.0 / 336.0 + s2 * (105.0 / 3456.0 + s2 * 945.0 / 42240.0))))
    return math.asin(s) - s


def atan_minus(x: float) -> float:
    """atan(x) - x (negative for x > 0)."""
    if abs(x) < 0.1:
        x2 = x * x
        return -x * x2 * (1.0 / 3.0 - x2 * (1.0 / 5.0 - x2 * (
            1.0 / 7.0 - x2 * (1.0 / 9.0 - x2 / 11.0))))
    return math.atan(x) - x


def asinh_minus(s: float) -> float:
    """asinh(s) - s (negative for s > 0)."""
    if abs(s) < 0.05:
        s2 = s * s
        return -s * s2 * (1.0 / 6.0 - s2 * (3.0 / 40.0 - s2 * (
            15.0 / 336.0 - s2 * (105.0 / 3456.0 - s2 * 945.0 / 42240.0))))
    return math.asinh(s) - s


# --------------------------------------------------------------------------- #
# exact-reduction trigonometry for pi-rational arguments
# --------------------------------------------------------------------------- #

def sinpi(a: float) -> float:
    """sin(pi*a) with the argument reduced exactly (zero at integers)."""
    r = math.remainder(a, 2.0)
    sign = 1.0
    if r < 0.0:
        r, sign = -r, -1.0
    if r > 0.5:
        r = 1.0 - r  # exact in [0.5, 1]
    return sign * math.sin(math.pi * r)


def cospi(a: float) -> float:
    """cos(pi*a) with exact reduction (zero at half-integers)."""
    r = abs(math.remainder(a, 2.0))
    if r == 0.5:
        return 0.0
    if r <= 0.5:
        return math.cos(math.pi * r)
    return -math.cos(math.pi * (1.0 - r))


# --------------------------------------------------------------------------- #
# gamma family
# --------------------------------------------------------------------------- #

def ln_gamma_real(x: float) -> float:
    """ln Gamma(x) for x > 0."""
    if not x > 0.0:
        raise ValueError(f"ln_gamma_real requires x > 0, got {x!r}")
    return float(sc.gammaln(x))


def ln_gamma_aux(a: float) -> float:
    """ln of gamma_aux(a) = exp(-a/2) * a^(a/2)."""
    if not a > 0.0:
        raise ValueError(f"gamma_aux requires a > 0, got {a!r}")
    return 0.5 * a * (math.log(a) - 1.0)


def gamma_aux(a: float) -> ScaledReal:
    """exp(-a/2) * a^(a/2) as a ScaledReal (overflows natively near a~350)."""
    g = ScaledReal.from_log(ln_gamma_aux(a))
    if _GAMMA_AUX_PERTURBATION != 0.0:
        g = g * (1.0 + _GAMMA_AUX_PERTURBATION)
    return g


def gamma_star(a: float) -> float:
    """Gamma*(a+1/2) defined by Gamma(a+1/2) = sqrt(2 pi) gamma_aux(a)^2 Gamma*.

    Evaluated fully in log space; tends to 1 from below as a grows.
    """
    if not a > 0.0:
        raise ValueError(f"gamma_star requires a > 0, got {a!r}")
    ln = float(sc.gammaln(a + 0.5)) - 0.5 * math.log(2.0 * math.pi) \
        - 2.0 * ln_gamma_aux(a)
    return math.exp(ln)


def ln_k_of_a(a: float) -> float:
    """ln k(a) for the barrier transmission factor k(a)."""
    if a > 0.0:
        # k = e^{-pi a} / (1 + sqrt(1 + e^{-2 pi a}))
        e2 = math.exp(-2.0 * math.pi * a) if a < 350.0 else 0.0
        return -math.pi * a - math.log1p(math.sqrt(1.0 + e2))
    e2 = math.exp(2.0 * math.pi * a)
    ep = math.exp(math.pi * a)
    # -log1p keeps precision as k -> 1 for a -> -inf
    return -math.log1p(ep + e2 / (1.0 + math.sqrt(1.0 + e2)))


def k_of_a(a: float) -> float:
    """k(a) = 1/(sqrt(1+e^{2 pi a}) + e^{pi a}), in (0, 1).

    Strictly decreasing; underflows to 0 for a >~ 237 (documented).
    """
    ln = ln_k_of_a(a)
    return math.exp(ln) if ln > -745.0 else 0.0


def phase_gamma_half(a: float) -> float:
    """Continuous phase of Gamma(1/2 + i a), zero at a = 0.

    Uses the analytic (single-valued) log-gamma on Re z = 1/2 > 0, which is
    exactly the continuous branch; no unwrapping is needed.
    """
    return float(sc.loggamma(complex(0.5, a)).imag)


def rho_star(a: float) -> float:
    """Gamma-phase correction rho_star(a).

    rho(a) = pi/8 - a/2 + (a/4) ln a^2 + rho_star(a); odd in a.  Direct
    evaluation below |a| = A_ASY, 5-term asymptotic series above.
    """
    if a == 0.0:
        return 0.0
    if abs(a) >= A_ASY:
        inv2 = 1.0 / (a * a)
        s = 0.0
        for d in reversed(RHO_STAR_COEFFS):
            s = s * inv2 + d
        return 0.25 * a * math.log1p(0.25 * inv2) - s / (2.0 * a)
    return 0.5 * phase_gamma_half(a) + 0.5 * a - 0.25 * a * math.log(a * a)
