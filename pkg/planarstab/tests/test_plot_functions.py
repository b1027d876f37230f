import numpy as np
from numpy.testing import assert_almost_equal as aae
from numpy.testing import assert_equal as ae
import pytest
from .. import plot_functions
from .. import field as fld

ROTATION = fld.builtin("linear_rotation")
CUBIC = fld.builtin("cubic_damped")


def test_nullcline_grid():
    "grid values are P and Q of the field"
    X, Y, P, Q = plot_functions.nullcline_grid(CUBIC, [-1.0, 1.0, -2.0, 2.0], (5, 9))
    ae(X.shape, (5, 9))
    aae(X[:, 0], np.linspace(-1.0, 1.0, 5), decimal=15)
    aae(Y[0, :], np.linspace(-2.0, 2.0, 9), decimal=15)
    aae(P, Y, decimal=15)
    aae(Q, -X - Y**3, decimal=12)


def test_nullcline_grid_of_constant_component():
    "constant components are broadcast to the grid"
    field = fld.parse_field("P = 1 ; Q = x")
    X, Y, P, Q = plot_functions.nullcline_grid(field, [0.0, 1.0, 0.0, 1.0], (3, 4))
    ae(P, np.ones((3, 4)))
    aae(Q, X, decimal=15)


def test_nullcline_grid_invalid():
    "check if invalid regions and shapes raise errors"
    with pytest.raises(ValueError):
        plot_functions.nullcline_grid(CUBIC, [1.0, -1.0, 0.0, 1.0])
    with pytest.raises(ValueError):
        plot_functions.nullcline_grid(CUBIC, [-1.0, 1.0, 0.0, 1.0], [5, 5])


def test_portrait_svg_is_deterministic(tmp_path):
    "identical inputs produce identical SVG files"
    t = np.linspace(0.0, 2 * np.pi, 50)
    orbits = [r * np.column_stack([np.cos(t), np.sin(t)]) for r in (0.5, 1.0)]
    cycle = orbits[1][:-1]
    paths = [tmp_path / "first.svg", tmp_path / "second.svg"]
    for path in paths:
        plot_functions.plot_portrait(
            ROTATION, [-2.0, 2.0, -2.0, 2.0], orbits, points=[(0.0, 0.0)],
            cycle=cycle, shape=(41, 41), save=path,
        )
    content = paths[0].read_bytes()
    assert content.startswith(b"<?xml")
    assert b"<svg" in content
    ae(content, paths[1].read_bytes())


def test_portrait_figure():
    "unsaved portraits return the figure with the field name as title"
    fig = plot_functions.plot_portrait(CUBIC, [-1.0, 1.0, -1.0, 1.0], [], shape=(21, 21))
    ax = fig.axes[0]
    ae(ax.get_title(), "cubic_damped")
    aae(ax.get_xlim(), (-1.0, 1.0), decimal=15)
