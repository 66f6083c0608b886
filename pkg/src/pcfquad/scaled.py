"""Overflow-safe real numbers stored as significand * exp(log_scale).

The parabolic cylinder assemblies multiply factors like exp(2*a*xi) and
gamma-function prefactors whose natural logarithms reach O(1e4) and beyond,
far outside double range.  ScaledReal keeps the exponent in a separate
natural-log field so products and quotients never overflow for
|log_scale| <= 1e8.

Canonical form: |significand| in [1, e), or significand == 0 with
log_scale == 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

_LN_MAX = 709.0   # exp() overflows just above this
_LN_TINY = -745.0  # exp() underflows to 0 below this


@dataclass(frozen=True)
class ScaledReal:
    """A real value ``significand * exp(log_scale)``."""

    significand: float
    log_scale: float

    # ------------------------------------------------------------------ #
    # construction
    # ------------------------------------------------------------------ #

    @staticmethod
    def zero() -> "ScaledReal":
        return ScaledReal(0.0, 0.0)

    @staticmethod
    def from_float(x: float) -> "ScaledReal":
        if x == 0.0:
            return ScaledReal.zero()
        if not math.isfinite(x):
            raise ValueError(f"cannot represent non-finite value {x!r}")
        return _normalize(x, 0.0)

    @staticmethod
    def from_log(log_abs: float, sign: float = 1.0) -> "ScaledReal":
        """Value ``sign * exp(log_abs)`` without evaluating the exponential."""
        if sign == 0.0:
            return ScaledReal.zero()
        if not math.isfinite(log_abs):
            raise ValueError(f"non-finite log magnitude {log_abs!r}")
        return _normalize(math.copysign(1.0, sign), log_abs)

    # ------------------------------------------------------------------ #
    # queries
    # ------------------------------------------------------------------ #

    def is_zero(self) -> bool:
        return self.significand == 0.0

    @property
    def sign(self) -> float:
        if self.significand > 0.0:
            return 1.0
        if self.significand < 0.0:
            return -1.0
        return 0.0

    def ln_abs(self) -> float:
        """Natural log of |value|; -inf for zero."""
        if self.significand == 0.0:
            return -math.inf
        return self.log_scale + math.log(abs(self.significand))

    def to_float(self) -> float:
        """Native double rendering.

        Raises OverflowError when the value exceeds double range; underflow
        to 0.0 is returned silently (documented behaviour).
        """
        if self.significand == 0.0:
            return 0.0
        ln = self.ln_abs()
        if ln > _LN_MAX:
            raise OverflowError(
                f"scaled value exp({ln:.6g}) exceeds double range"
            )
        if ln < _LN_TINY:
            return math.copysign(0.0, self.significand)
        return self.significand * math.exp(self.log_scale)

    # ------------------------------------------------------------------ #
    # arithmetic
    # ------------------------------------------------------------------ #

    def __neg__(self) -> "ScaledReal":
        return ScaledReal(-self.significand, self.log_scale)

    def __abs__(self) -> "ScaledReal":
        return ScaledReal(abs(self.significand), self.log_scale)

    def __mul__(self, other):
        other = _coerce(other)
        if self.is_zero() or other.is_zero():
            return ScaledReal.zero()
        return _normalize(self.significand * other.significand,
                          self.log_scale + other.log_scale)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("ScaledReal division by zero")
        if self.is_zero():
            return ScaledReal.zero()
        return _normalize(self.significand / other.significand,
                          self.log_scale - other.log_scale)

    def __rtruediv__(self, other):
        return _coerce(other) / self

    def __add__(self, other):
        other = _coerce(other)
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        # align to the larger scale so the exp() below never overflows
        if self.log_scale >= other.log_scale:
            hi, lo = self, other
        else:
            hi, lo = other, self
        shift = lo.log_scale - hi.log_scale   # <= 0
        s = hi.significand + lo.significand * math.exp(shift)
        if s == 0.0:
            return ScaledReal.zero()
        return _normalize(s, hi.log_scale)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) + (-self)

    # ------------------------------------------------------------------ #
    # comparison helpers
    # ------------------------------------------------------------------ #

    def rel_diff(self, other) -> float:
        """|self - other| / max(|self|, |other|); 0 when both are zero."""
        other = _coerce(other)
        if self.is_zero() and other.is_zero():
            return 0.0
        diff = self - other
        if diff.is_zero():
            return 0.0
        denom_ln = max(self.ln_abs(), other.ln_abs())
        return math.exp(min(diff.ln_abs() - denom_ln, _LN_MAX))

    def __repr__(self) -> str:
        return f"ScaledReal({self.significand!r}, {self.log_scale!r})"

    def __str__(self) -> str:
        try:
            return f"{self.to_float():.17g}"
        except OverflowError:
            return f"{self.significand:.17g}*exp({self.log_scale:.17g})"


def _coerce(x) -> ScaledReal:
    if isinstance(x, ScaledReal):
        return x
    if isinstance(x, (int, float)):
        return ScaledReal.from_float(float(x))
    raise TypeError(f"cannot mix ScaledReal with {type(x).__name__}")


def _normalize(significand: float, log_scale: float) -> ScaledReal:
    if significand == 0.0:
        return ScaledReal.zero()
    if not math.isfinite(significand):
        raise ValueError(f"non-finite significand {significand!r}")
    shift = math.floor(math.log(abs(significand)))
    if shift != 0:
        significand *= math.exp(-shift)
        log_scale += shift
    # exp/log rounding can leave the magnitude a hair outside [1, e)
    if abs(significand) >= math.e:
        significand /= math.e
        log_scale += 1.0
    elif abs(significand) < 1.0:
        significand *= math.e
        log_scale -= 1.0
    return ScaledReal(significand, log_scale)
