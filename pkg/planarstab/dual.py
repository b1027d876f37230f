"""
Forward-mode dual numbers carrying the gradient with respect to the two
phase-plane coordinates. The value and derivative parts may be floats,
numpy arrays or ``intervals.Interval`` objects, so the same expression code
yields pointwise jets, vectorized jets and interval jets.
"""

import numpy as np
from .intervals import Interval


class Dual:
    """
    Number val + dx * e_x + dy * e_y with e_x, e_y infinitesimal.

    parameters
    ----------
    val : scalar, numpy array or Interval
        Value part.
    dx, dy : same type as val
        Partial derivatives with respect to x and y.
    """

    __slots__ = ("val", "dx", "dy")

    def __init__(self, val, dx, dy):
        self.val = val
        self.dx = dx
        self.dy = dy

    def __repr__(self):
        return "Dual({!r}, {!r}, {!r})".format(self.val, self.dx, self.dy)

    @classmethod
    def variables(cls, x, y):
        """
        Seed the coordinates x and y with unit derivatives.
        """
        zero, one = _zero_one(x)
        return cls(x, one, zero), cls(y, zero, one)

    def __neg__(self):
        return Dual(-self.val, -self.dx, -self.dy)

    def __pos__(self):
        return self

    def __add__(self, other):
        if isinstance(other, Dual):
            return Dual(self.val + other.val, self.dx + other.dx, self.dy + other.dy)
        return Dual(self.val + other, self.dx, self.dy)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, Dual):
            return Dual(self.val - other.val, self.dx - other.dx, self.dy - other.dy)
        return Dual(self.val - other, self.dx, self.dy)

    def __rsub__(self, other):
        return Dual(other - self.val, -self.dx, -self.dy)

    def __mul__(self, other):
        if isinstance(other, Dual):
            return Dual(
                self.val * other.val,
                self.dx * other.val + self.val * other.dx,
                self.dy * other.val + self.val * other.dy,
            )
        return Dual(self.val * other, self.dx * other, self.dy * other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Dual):
            inverse = 1.0 / other.val
            value = self.val * inverse
            return Dual(
                value,
                (self.dx - value * other.dx) * inverse,
                (self.dy - value * other.dy) * inverse,
            )
        return Dual(self.val / other, self.dx / other, self.dy / other)

    def __rtruediv__(self, other):
        inverse = 1.0 / self.val
        value = other * inverse
        factor = -value * inverse
        return Dual(value, factor * self.dx, factor * self.dy)

    def __pow__(self, n):
        if n == 0:
            zero, one = _zero_one(self.val)
            return Dual(one, zero, zero)
        if n == 1:
            return self
        factor = n * (self.val ** (n - 1))
        return Dual(self.val**n, factor * self.dx, factor * self.dy)

    def chain(self, value, derivative):
        """
        Compose with a scalar function whose value and derivative at
        ``self.val`` are given.
        """
        return Dual(value, derivative * self.dx, derivative * self.dy)


def _zero_one(like):
    if isinstance(like, Interval):
        return Interval(0.0), Interval(1.0)
    if isinstance(like, np.ndarray):
        return np.zeros_like(like, dtype=float), np.ones_like(like, dtype=float)
    return 0.0, 1.0


def sin(v):
    if isinstance(v, Dual):
        return v.chain(sin(v.val), cos(v.val))
    if isinstance(v, Interval):
        return v.sin()
    return np.sin(v)


def cos(v):
    if isinstance(v, Dual):
        return v.chain(cos(v.val), -sin(v.val))
    if isinstance(v, Interval):
        return v.cos()
    return np.cos(v)


def exp(v):
    if isinstance(v, Dual):
        value = exp(v.val)
        return v.chain(value, value)
    if isinstance(v, Interval):
        return v.exp()
    return np.exp(v)


def sqrt(v):
    if isinstance(v, Dual):
        value = sqrt(v.val)
        return v.chain(value, 0.5 / value)
    if isinstance(v, Interval):
        return v.sqrt()
    return np.sqrt(v)


#: Functions available to the expression language
FUNCTIONS = {"sin": sin, "cos": cos, "exp": exp, "sqrt": sqrt}
