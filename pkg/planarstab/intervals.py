"""
Closed intervals with outward rounding. A bound is moved one unit in the last
place outwards whenever the floating-point operation producing it was
inexact, so the true value of an expression evaluated over a box is always
contained in the computed enclosure, while exact arithmetic (sums and
products of small integers, zeros) keeps degenerate enclosures tight.
"""

import math
import numpy as np
from . import constants as cts


class EnclosureError(ArithmeticError):
    """
    Raised when an interval operation has no bounded enclosure
    (division by an interval containing zero, sqrt of a negative interval).
    The caller must split the box.
    """


_SPLITTER = 134217729.0  # 2**27 + 1


def _down(x):
    return float(np.nextafter(x, -np.inf))


def _up(x):
    return float(np.nextafter(x, np.inf))


def _sum_is_exact(a, b, s):
    if math.isfinite(s) is False:
        return True
    bb = s - a
    return ((a - (s - bb)) + (b - bb)) == 0.0


def _split(a):
    c = _SPLITTER * a
    hi = c - (c - a)
    return hi, a - hi


def _product_is_exact(a, b, p):
    if math.isfinite(p) is False or a == 0.0 or b == 0.0:
        return True
    if abs(a) > 1e300 or abs(b) > 1e300 or abs(p) < 1e-290:
        return False
    ah, al = _split(a)
    bh, bl = _split(b)
    err = ((ah * bh - p) + ah * bl + al * bh) + al * bl
    return err == 0.0


def _add(a, b):
    s = a + b
    if _sum_is_exact(a, b, s):
        return s, s
    return _down(s), _up(s)


def _mul(a, b):
    p = a * b
    if _product_is_exact(a, b, p):
        return p, p
    return _down(p), _up(p)


class Interval:
    """
    Closed interval [lo, hi] of real numbers.

    parameters
    ----------
    lo, hi : scalars
        Lower and upper bounds. ``lo`` must not exceed ``hi``.
        If ``hi`` is None, the degenerate interval [lo, lo] is created.
    """

    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi=None):
        if hi is None:
            hi = lo
        self.lo = float(lo)
        self.hi = float(hi)
        if (self.lo > self.hi) or math.isnan(self.lo) or math.isnan(self.hi):
            raise ValueError("invalid interval [{}, {}]".format(lo, hi))

    def __repr__(self):
        return "Interval({!r}, {!r})".format(self.lo, self.hi)

    @property
    def width(self):
        return self.hi - self.lo

    @property
    def mid(self):
        return 0.5 * (self.lo + self.hi)

    @property
    def mag(self):
        return max(abs(self.lo), abs(self.hi))

    def contains(self, x, slack=0.0):
        return (self.lo - slack <= x) and (x <= self.hi + slack)

    def __eq__(self, other):
        if isinstance(other, Interval):
            return (self.lo == other.lo) and (self.hi == other.hi)
        return NotImplemented

    __hash__ = None

    def __neg__(self):
        return Interval(-self.hi, -self.lo)

    def __pos__(self):
        return self

    def __add__(self, other):
        other = _coerce(other)
        lo = _add(self.lo, other.lo)[0]
        hi = _add(self.hi, other.hi)[1]
        return Interval(lo, hi)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        products = [
            _mul(self.lo, other.lo),
            _mul(self.lo, other.hi),
            _mul(self.hi, other.lo),
            _mul(self.hi, other.hi),
        ]
        lo = min(p[0] for p in products)
        hi = max(p[1] for p in products)
        return Interval(lo, hi)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce(other)
        if other.lo <= 0.0 <= other.hi:
            raise EnclosureError(
                "division by an interval containing zero {}".format(other)
            )
        inverse = Interval(_down(1.0 / other.hi), _up(1.0 / other.lo))
        if other.lo == other.hi and _product_is_exact(
            1.0 / other.lo, other.lo, 1.0
        ):
            inverse = Interval(1.0 / other.lo)
        return self * inverse

    def __rtruediv__(self, other):
        return _coerce(other) / self

    def __pow__(self, n):
        """
        Integer power. Even powers of intervals straddling zero start at zero.
        """
        if isinstance(n, (int, np.integer)) is False or n < 0:
            raise ValueError("interval powers must be non-negative integers")
        if n == 0:
            return Interval(1.0)
        result = self
        for _ in range(n - 1):
            result = result * self
        if n % 2 == 0:
            magnitude = self.abs()
            tight = magnitude
            for _ in range(n - 1):
                tight = tight * magnitude
            return Interval(max(result.lo, tight.lo, 0.0), min(result.hi, tight.hi))
        return result

    def exp(self):
        return Interval(max(0.0, _down(_exp(self.lo))), _up(_exp(self.hi)))

    def sqrt(self):
        if self.lo < 0.0:
            raise EnclosureError(
                "sqrt of an interval with negative part {}".format(self)
            )
        return Interval(
            max(0.0, _down(math.sqrt(self.lo))), _up(math.sqrt(self.hi))
        )

    def sin(self):
        return _periodic(self, math.sin, 0.5 * math.pi)

    def cos(self):
        return _periodic(self, math.cos, 0.0)

    def abs(self):
        if self.lo >= 0.0:
            return self
        if self.hi <= 0.0:
            return -self
        return Interval(0.0, max(-self.lo, self.hi))


def _exp(x):
    try:
        return math.exp(x)
    except OverflowError:
        return math.inf


def _coerce(value):
    if isinstance(value, Interval):
        return value
    return Interval(value)


def _periodic(interval, func, peak):
    """
    Enclosure of sin or cos, whose maxima sit at ``peak`` + 2k pi and
    minima half a period later.
    """
    if interval.width >= 2.0 * math.pi:
        return Interval(-1.0, 1.0)
    a, b = func(interval.lo), func(interval.hi)
    lo, hi = min(a, b), max(a, b)
    k = math.ceil((interval.lo - peak) / (2.0 * math.pi))
    if peak + 2.0 * math.pi * k <= interval.hi:
        hi = 1.0
    k = math.ceil((interval.lo - peak - math.pi) / (2.0 * math.pi))
    if peak + math.pi + 2.0 * math.pi * k <= interval.hi:
        lo = -1.0
    return Interval(max(-1.0, _down(lo)), min(1.0, _up(hi)))


def hull(values):
    """
    Smallest interval containing a sequence of scalars and intervals.
    """
    lo, hi = math.inf, -math.inf
    for v in values:
        v = _coerce(v)
        lo = min(lo, v.lo)
        hi = max(hi, v.hi)
    return Interval(lo, hi)


def widen(interval, scale, ulps=cts.ULPS):
    """
    Pad both bounds by ``ulps`` units of roundoff relative to ``scale``.

    Closed-form enclosures are exact statements about real numbers, while
    the same quantity computed pointwise in floating point may fall a few
    roundoffs outside. The padding is zero when ``scale`` is zero, so exact
    degenerate enclosures stay degenerate.

    parameters
    ----------
    interval : Interval
        Enclosure to widen.
    scale : float
        Magnitude of the largest term the quantity is computed from.
    ulps : int
        Number of roundoffs. Default is ``constants.ULPS``.
    """
    pad = ulps * np.finfo(float).eps * float(scale)
    if pad == 0.0:
        return interval
    return Interval(_down(interval.lo - pad), _up(interval.hi + pad))
