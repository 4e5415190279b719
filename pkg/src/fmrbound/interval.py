"""Validated interval arithmetic on binary64 endpoints.

Soundness contract: for any operation and any real points drawn from the
input intervals, the exact real result lies inside the returned interval
(containment), and nested inputs yield nested outputs (inclusion
monotonicity).  Outward rounding is realized by one-ulp ``nextafter``
nudges guarded by an exactness test, so arithmetic on exactly
representable data stays exact: ``sqr([-2,3]) == [0,9]``, not
``[0, 9 + ulp]``.

``EMPTY`` and ``UNBOUNDED`` are explicit variants rather than sentinel
numbers.  ``EMPTY`` comes out of an empty intersection and propagates
through arithmetic; ``UNBOUNDED`` is produced only by ``div_extended``
when the divisor contains zero, and arithmetic on it raises so it can
never be silently absorbed -- callers must branch on it.

Angles are never reduced modulo 2*pi.  ``sin``/``cos`` evaluate ranges
from a critical-point table spanning [-2*pi, 4*pi], which covers every
argument the energy model can produce; anything wider or outside the
table falls back to the always-sound [-1, 1].
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

__all__ = [
    "Interval",
    "EMPTY",
    "UNBOUNDED",
    "IntervalLike",
    "TWO_PI",
    "TRIG_TABLE_LO",
    "TRIG_TABLE_HI",
    "add",
    "sub",
    "mul",
    "sqr",
    "ipow",
    "div_extended",
    "sin",
    "cos",
    "acos",
    "atan",
    "hull",
    "intersect",
    "width",
    "midpoint",
    "bisect",
    "contains",
    "contains_zero",
]

_INF = math.inf
_MIN_NORMAL = 2.2250738585072014e-308
TWO_PI = 2.0 * math.pi
TRIG_TABLE_LO = -TWO_PI - 1e-9
TRIG_TABLE_HI = 2.0 * TWO_PI + 1e-9
_TABLE_LO = TRIG_TABLE_LO
_TABLE_HI = TRIG_TABLE_HI

# Critical points of sin/cos within the table range.  The float values sit
# within 2 ulp of the exact multiples of pi/2; membership is tested with an
# absolute slack so a true critical point can never be missed.  Falsely
# treating one as inside only widens the result, which is sound.
_SIN_TOP = (-3.0 * math.pi / 2.0, math.pi / 2.0, 5.0 * math.pi / 2.0)
_SIN_BOT = (-math.pi / 2.0, 3.0 * math.pi / 2.0, 7.0 * math.pi / 2.0)
_COS_TOP = (-TWO_PI, 0.0, TWO_PI, 2.0 * TWO_PI)
_COS_BOT = (-math.pi, math.pi, 3.0 * math.pi)
_CRIT_SLACK = 4e-15

_PI_UP = math.nextafter(math.pi, _INF)  # smallest float above the true pi


# ---------------------------------------------------------------------------
# directed endpoint rounding


def _down(x: float) -> float:
    return math.nextafter(x, -_INF)


def _up(x: float) -> float:
    return math.nextafter(x, _INF)


def _down_nz(x: float) -> float:
    # exact zeros stay exact; see _mul_lo for why this is sound here
    return x if x == 0.0 else math.nextafter(x, -_INF)


def _up_nz(x: float) -> float:
    return x if x == 0.0 else math.nextafter(x, _INF)


def _add_lo(a: float, b: float) -> float:
    """Lower bound of a+b; exact when the float sum is (TwoSum residual)."""
    s = a + b
    t = s - a
    err = (a - (s - t)) + (b - t)
    return s if err >= 0.0 else _down(s)


def _add_hi(a: float, b: float) -> float:
    s = a + b
    t = s - a
    err = (a - (s - t)) + (b - t)
    return s if err <= 0.0 else _up(s)


def _pow2(x: float) -> bool:
    if x == 0.0 or math.isinf(x):
        return False
    m = math.frexp(x)[0]
    return m == 0.5 or m == -0.5


def _mul_exact(a: float, b: float, p: float) -> bool:
    # Conservative exactness certificate (no fma on this Python).  A zero
    # product of nonzero factors would be an underflow and is never
    # certified; in this model every nonzero factor magnitude is far above
    # the gradual-underflow range, so certified zeros really are exact.
    if a == 0.0 or b == 0.0:
        return True
    if p == 0.0:
        return False
    if (_pow2(a) or _pow2(b)) and abs(p) >= _MIN_NORMAL:
        return True
    if (
        a.is_integer()
        and b.is_integer()
        and abs(a) <= 67108864.0
        and abs(b) <= 67108864.0
    ):
        return True  # |a*b| <= 2^52, an exact integer
    return False


def _mul_lo(a: float, b: float) -> float:
    p = a * b
    return p if _mul_exact(a, b, p) else _down(p)


def _mul_hi(a: float, b: float) -> float:
    p = a * b
    return p if _mul_exact(a, b, p) else _up(p)


def _div_exact(a: float, b: float, q: float) -> bool:
    if a == 0.0:
        return True
    return _pow2(b) and abs(q) >= _MIN_NORMAL


def _div_lo(a: float, b: float) -> float:
    q = a / b
    return q if _div_exact(a, b, q) else _down(q)


def _div_hi(a: float, b: float) -> float:
    q = a / b
    return q if _div_exact(a, b, q) else _up(q)


# ---------------------------------------------------------------------------
# variants


class _EmptyInterval:
    """The empty set.  Absorbing for arithmetic; contains nothing."""

    __slots__ = ()

    def __repr__(self) -> str:
        return "EMPTY"

    def contains(self, x: float) -> bool:
        return False

    def contains_zero(self) -> bool:
        return False

    def __add__(self, other):
        return self

    __radd__ = __add__
    __sub__ = __add__
    __rsub__ = __add__
    __mul__ = __add__
    __rmul__ = __add__
    __truediv__ = __add__
    __rtruediv__ = __add__

    def __neg__(self):
        return self


class _UnboundedInterval:
    """The whole real line, as produced by extended division.

    Arithmetic raises instead of propagating: a divider result must be
    consumed (kept or branched on) right where it was produced.
    """

    __slots__ = ()

    def __repr__(self) -> str:
        return "UNBOUNDED"

    def contains(self, x: float) -> bool:
        return True

    def contains_zero(self) -> bool:
        return True

    def _refuse(self, *args):
        raise TypeError("arithmetic on UNBOUNDED; branch on it instead")

    __add__ = _refuse
    __radd__ = _refuse
    __sub__ = _refuse
    __rsub__ = _refuse
    __mul__ = _refuse
    __rmul__ = _refuse
    __truediv__ = _refuse
    __rtruediv__ = _refuse
    __neg__ = _refuse


EMPTY = _EmptyInterval()
UNBOUNDED = _UnboundedInterval()


# ---------------------------------------------------------------------------
# the interval proper


@dataclass(frozen=True, slots=True)
class Interval:
    """Closed interval [lo, hi] of binary64 numbers, lo <= hi, no NaN."""

    lo: float
    hi: float

    def __post_init__(self) -> None:
        lo = float(self.lo)
        hi = float(self.hi)
        if math.isnan(lo) or math.isnan(hi):
            raise ValueError("NaN endpoint")
        if lo > hi:
            raise ValueError(f"inverted interval [{lo}, {hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    # -- queries ----------------------------------------------------------

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def midpoint(self) -> float:
        m = 0.5 * (self.lo + self.hi)
        if not math.isfinite(m):
            m = self.lo + 0.5 * (self.hi - self.lo)
        # clamp so the midpoint never escapes the interval
        return min(max(m, self.lo), self.hi)

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi

    def contains(self, x: float) -> bool:
        return self.lo <= x <= self.hi

    def contains_zero(self) -> bool:
        return self.lo <= 0.0 <= self.hi

    def strictly_positive_part(self) -> bool:
        """True when the interval reaches strictly positive numbers."""
        return self.hi > 0.0

    # -- set operations ----------------------------------------------------

    def hull(self, other: "Interval") -> "Interval":
        if other is EMPTY:
            return self
        return Interval(min(self.lo, other.lo), max(self.hi, other.hi))

    def intersect(self, other: "Interval"):
        if other is EMPTY:
            return EMPTY
        lo = max(self.lo, other.lo)
        hi = min(self.hi, other.hi)
        return Interval(lo, hi) if lo <= hi else EMPTY

    def bisect(self) -> tuple["Interval", "Interval"]:
        """Split at the midpoint.  Degenerate intervals cannot be split."""
        m = self.midpoint
        if not (self.lo < m < self.hi):
            raise ValueError(f"cannot bisect degenerate interval {self}")
        return Interval(self.lo, m), Interval(m, self.hi)

    # -- arithmetic ---------------------------------------------------------

    def __neg__(self) -> "Interval":
        return Interval(-self.hi, -self.lo)

    def __add__(self, other):
        other = _coerce(other)
        if other is EMPTY:
            return EMPTY
        return Interval(_add_lo(self.lo, other.lo), _add_hi(self.hi, other.hi))

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        if other is EMPTY:
            return EMPTY
        return Interval(_add_lo(self.lo, -other.hi), _add_hi(self.hi, -other.lo))

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        other = _coerce(other)
        if other is EMPTY:
            return EMPTY
        al, ah, bl, bh = self.lo, self.hi, other.lo, other.hi
        lo = min(
            _mul_lo(al, bl), _mul_lo(al, bh), _mul_lo(ah, bl), _mul_lo(ah, bh)
        )
        hi = max(
            _mul_hi(al, bl), _mul_hi(al, bh), _mul_hi(ah, bl), _mul_hi(ah, bh)
        )
        return Interval(lo, hi)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return div_extended(self, _coerce(other))

    def __rtruediv__(self, other):
        return div_extended(_coerce(other), self)

    def __repr__(self) -> str:
        return f"[{self.lo!r}, {self.hi!r}]"


IntervalLike = Union[Interval, _EmptyInterval, _UnboundedInterval]


def _coerce(x):
    if isinstance(x, Interval) or x is EMPTY:
        return x
    if x is UNBOUNDED:
        raise TypeError("arithmetic on UNBOUNDED; branch on it instead")
    return Interval(x, x)


# ---------------------------------------------------------------------------
# functional operation set


def add(a: IntervalLike, b: IntervalLike):
    return _coerce(a) + b


def sub(a: IntervalLike, b: IntervalLike):
    return _coerce(a) - b


def mul(a: IntervalLike, b: IntervalLike):
    return _coerce(a) * b


def sqr(a: IntervalLike):
    """Range of x*x over the interval (dependent form).

    Never implemented as mul(a, a): for intervals straddling zero the
    dependent form gives the true lower bound 0 where the product form
    would report a spurious negative part.
    """
    if a is EMPTY:
        return EMPTY
    lo, hi = a.lo, a.hi
    if lo <= 0.0 <= hi:
        m = max(-lo, hi)
        return Interval(0.0, _mul_hi(m, m))
    small = min(abs(lo), abs(hi))
    big = max(abs(lo), abs(hi))
    return Interval(_mul_lo(small, small), _mul_hi(big, big))


def _pow_dn(x: float, k: int) -> float:
    p = x ** k
    if x == 0.0 or x == 1.0 or (x == -1.0 and k % 2 == 0) or k == 1:
        return p
    return _down(_down(p))  # libm pow: allow 2 ulp


def _pow_up(x: float, k: int) -> float:
    p = x ** k
    if x == 0.0 or x == 1.0 or (x == -1.0 and k % 2 == 0) or k == 1:
        return p
    return _up(_up(p))


def ipow(a: IntervalLike, n: int):
    """Enclosure of x**n for integer n >= 0, with even-power tightening."""
    if n < 0 or int(n) != n:
        raise ValueError("ipow wants a nonnegative integer exponent")
    if a is EMPTY:
        return EMPTY
    if n == 0:
        return Interval(1.0, 1.0)
    if n == 1:
        return Interval(a.lo, a.hi)
    if n % 2 == 0:
        base = sqr(a)  # lo >= 0; x^(n/2) is then monotone
        k = n // 2
        if k == 1:
            return base
        return Interval(_pow_dn(base.lo, k), _pow_up(base.hi, k))
    return Interval(_pow_dn(a.lo, n), _pow_up(a.hi, n))


def div_extended(a, b):
    """a / b; the whole line when the divisor contains zero.

    UNBOUNDED is a legitimate value here, not an error: a downstream test
    receiving it must treat the quotient as unconstrained.
    """
    if a is EMPTY or b is EMPTY:
        return EMPTY
    if b.lo <= 0.0 <= b.hi:
        return UNBOUNDED
    al, ah, bl, bh = a.lo, a.hi, b.lo, b.hi
    lo = min(
        _div_lo(al, bl), _div_lo(al, bh), _div_lo(ah, bl), _div_lo(ah, bh)
    )
    hi = max(
        _div_hi(al, bl), _div_hi(al, bh), _div_hi(ah, bl), _div_hi(ah, bh)
    )
    return Interval(lo, hi)


def _has_crit(lo: float, hi: float, points: tuple) -> bool:
    for c in points:
        if lo - _CRIT_SLACK <= c <= hi + _CRIT_SLACK:
            return True
    return False


def sin(a: IntervalLike):
    """Range enclosure of sin over the interval, always within [-1, 1]."""
    if a is EMPTY:
        return EMPTY
    lo, hi = a.lo, a.hi
    if hi - lo >= TWO_PI or lo < _TABLE_LO or hi > _TABLE_HI:
        return Interval(-1.0, 1.0)
    slo = math.sin(lo)
    shi = math.sin(hi)
    out_hi = 1.0 if _has_crit(lo, hi, _SIN_TOP) else min(1.0, _up_nz(max(slo, shi)))
    out_lo = -1.0 if _has_crit(lo, hi, _SIN_BOT) else max(-1.0, _down_nz(min(slo, shi)))
    return Interval(out_lo, out_hi)


def cos(a: IntervalLike):
    """Range enclosure of cos over the interval, always within [-1, 1]."""
    if a is EMPTY:
        return EMPTY
    lo, hi = a.lo, a.hi
    if hi - lo >= TWO_PI or lo < _TABLE_LO or hi > _TABLE_HI:
        return Interval(-1.0, 1.0)
    clo = math.cos(lo)
    chi = math.cos(hi)
    out_hi = 1.0 if _has_crit(lo, hi, _COS_TOP) else min(1.0, _up_nz(max(clo, chi)))
    out_lo = -1.0 if _has_crit(lo, hi, _COS_BOT) else max(-1.0, _down_nz(min(clo, chi)))
    return Interval(out_lo, out_hi)


def acos(a: IntervalLike):
    """Enclosure of arccos; inputs are clamped to [-1, 1] first.

    Used on direction cosines whose exact range is within [-1, 1] even
    when outward rounding pushed an endpoint slightly past it.
    """
    if a is EMPTY:
        return EMPTY
    lo = min(1.0, max(-1.0, a.lo))
    hi = min(1.0, max(-1.0, a.hi))
    out_lo = max(0.0, _down_nz(math.acos(hi)))
    out_hi = min(_PI_UP, _up_nz(math.acos(lo)))
    return Interval(out_lo, out_hi)


def atan(a: IntervalLike):
    if a is EMPTY:
        return EMPTY
    return Interval(_down_nz(math.atan(a.lo)), _up_nz(math.atan(a.hi)))


def hull(a, b):
    if a is EMPTY:
        return b
    if b is EMPTY:
        return a
    return a.hull(b)


def intersect(a, b):
    if a is EMPTY or b is EMPTY:
        return EMPTY
    return a.intersect(b)


def width(a: Interval) -> float:
    if a is EMPTY or a is UNBOUNDED:
        raise ValueError(f"width of {a!r}")
    return a.width


def midpoint(a: Interval) -> float:
    if a is EMPTY or a is UNBOUNDED:
        raise ValueError(f"midpoint of {a!r}")
    return a.midpoint


def bisect(a: Interval):
    if a is EMPTY or a is UNBOUNDED:
        raise ValueError(f"bisect of {a!r}")
    return a.bisect()


def contains(a, x: float) -> bool:
    return a.contains(x)


def contains_zero(a) -> bool:
    return a.contains_zero()
