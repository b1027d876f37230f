import numpy as np
from numpy.testing import assert_almost_equal as aae
from numpy.testing import assert_equal as ae
from .. import dual
from ..dual import Dual
from ..intervals import Interval


def test_polynomial_gradient():
    "gradient of x^2 y - 3 x at (2, 5)"
    x, y = Dual.variables(2.0, 5.0)
    f = x**2 * y - 3 * x
    ae(f.val, 14.0)
    ae(f.dx, 2 * 2.0 * 5.0 - 3)
    ae(f.dy, 4.0)


def test_quotient_and_functions():
    "gradient of sin(x)/y + exp(x y) + sqrt(y) against closed forms"
    x0, y0 = 0.7, 1.3
    x, y = Dual.variables(x0, y0)
    f = dual.sin(x) / y + dual.exp(x * y) + dual.sqrt(y)
    aae(f.val, np.sin(x0) / y0 + np.exp(x0 * y0) + np.sqrt(y0), decimal=14)
    aae(f.dx, np.cos(x0) / y0 + y0 * np.exp(x0 * y0), decimal=14)
    aae(
        f.dy,
        -np.sin(x0) / y0**2 + x0 * np.exp(x0 * y0) + 0.5 / np.sqrt(y0),
        decimal=14,
    )


def test_reflected_operators():
    "constants on the left of -, / and cos"
    x, y = Dual.variables(2.0, 3.0)
    f = 1.0 - 4.0 / x + dual.cos(y)
    aae(f.val, 1.0 - 2.0 + np.cos(3.0), decimal=15)
    aae(f.dx, 1.0, decimal=15)
    aae(f.dy, -np.sin(3.0), decimal=15)


def test_vectorized_dual():
    "array valued duals compute gradients elementwise"
    xs = np.linspace(-1, 1, 5)
    ys = np.linspace(0, 2, 5)
    x, y = Dual.variables(xs, ys)
    f = x * y**3
    aae(f.dx, ys**3, decimal=15)
    aae(f.dy, 3 * xs * ys**2, decimal=15)


def test_interval_dual_encloses_pointwise_gradient():
    "interval duals enclose the pointwise gradients over a box"
    X, Y = Dual.variables(Interval(0.5, 0.6), Interval(-0.2, 0.1))
    F = X * dual.exp(Y) - Y**2
    for x0 in np.linspace(0.5, 0.6, 4):
        for y0 in np.linspace(-0.2, 0.1, 4):
            x, y = Dual.variables(x0, y0)
            f = x * dual.exp(y) - y**2
            assert F.val.contains(f.val)
            assert F.dx.contains(f.dx)
            assert F.dy.contains(f.dy)


def test_zero_power():
    "x^0 is the constant one"
    x, _ = Dual.variables(3.0, 1.0)
    f = x**0
    ae((f.val, f.dx, f.dy), (1.0, 0.0, 0.0))
