import numpy as np
import pytest
from .. import check, data_structures
from .. import field as fld

##### field


def test_field_valid():
    "built-in and parsed fields pass the check"
    for name in fld.BUILTINS:
        check.is_field(fld.builtin(name))
    check.is_field(fld.parse_field("P = -y ; Q = x"))


def test_field_invalid():
    "check if invalid fields raise errors"
    field = fld.builtin("cubic_damped")
    with pytest.raises(ValueError):
        check.is_field([field])
    wrong_keys = dict(field)
    del wrong_keys["analytic"]
    with pytest.raises(ValueError):
        check.is_field(wrong_keys)
    wrong_source = dict(field, source="van_der_pol")
    with pytest.raises(ValueError):
        check.is_field(wrong_source)
    wrong_tree = dict(field, p_expr="y")
    with pytest.raises(ValueError):
        check.is_field(wrong_tree)
    wrong_flag = dict(field, analytic=1)
    with pytest.raises(ValueError):
        check.is_field(wrong_flag)


def test_field_invalid_trees():
    "syntax trees are checked node by node"
    field = fld.parse_field("P = -k * y ; Q = x", params={"k": 2.0})
    check.is_field(field)
    unresolved = dict(field, parameters={})
    with pytest.raises(ValueError):
        check.is_field(unresolved)
    unknown_call = dict(field, q_expr=("call", "tan", ("var", "x")))
    with pytest.raises(ValueError):
        check.is_field(unknown_call)
    bad_power = dict(field, q_expr=("pow", ("var", "x"), -1))
    with pytest.raises(ValueError):
        check.is_field(bad_power)
    # the reserved bump function needs the bump shape
    bump = fld.builtin("bump_annulus")
    with pytest.raises(ValueError):
        check.is_field(dict(bump, parameters={"r0": 1.0}))
    with pytest.raises(ValueError):
        check.is_field(dict(field, p_expr=bump["p_expr"]))


##### integrator config


def test_integrator_config_invalid():
    "check if invalid settings raise errors"
    config = data_structures.integrator_config()
    check.is_integrator_config(config)
    with pytest.raises(ValueError):
        check.is_integrator_config(dict(config, rtol=-1e-8))
    with pytest.raises(ValueError):
        check.is_integrator_config(dict(config, max_steps=10.5))
    with pytest.raises(ValueError):
        check.is_integrator_config(dict(config, h_init=1.0, h_max=0.1))
    shuffled = {k: config[k] for k in reversed(list(config))}
    with pytest.raises(ValueError):
        check.is_integrator_config(shuffled)


##### section and events


def test_section_invalid():
    "a section direction must be a unit vector"
    check.is_section({"base": (0.0, 0.0), "direction": (0.6, 0.8)})
    with pytest.raises(ValueError):
        check.is_section({"base": (0.0, 0.0), "direction": (1.0, 1.0)})
    with pytest.raises(ValueError):
        check.is_section({"direction": (1.0, 0.0), "base": (0.0, 0.0)})


def test_event_invalid():
    "check if malformed events raise errors"
    section = data_structures.section((0.0, 0.0), (1.0, 0.0))
    check.is_event(data_structures.ray_crossing_event(section, orientation=-1))
    with pytest.raises(ValueError):
        check.is_event({"kind": "RAY_CROSSING", "section": section, "orientation": 2})
    with pytest.raises(ValueError):
        check.is_event({"kind": "ENTER_BALL", "center": (0.0, 0.0), "radius": 0.0})
    with pytest.raises(ValueError):
        check.is_event({"kind": "EXIT_BOX", "region": [1.0, 0.0, 0.0, 1.0]})
    with pytest.raises(ValueError):
        check.is_event({"kind": "HIT_WALL"})


##### scalars, points, regions


def test_scalar_invalid():
    "booleans, strings and non-finite numbers are not scalars"
    check.is_scalar(np.float32(1.5))
    check.is_scalar(3)
    for value in [True, "1.0", np.inf, np.nan, [1.0]]:
        with pytest.raises(ValueError):
            check.is_scalar(value)
    with pytest.raises(ValueError):
        check.is_scalar(0.0, positive=True)


def test_integer_invalid():
    "check if non-integers or non-positive values raise errors"
    check.is_integer(np.int64(4))
    for value in [1.0, False, "2"]:
        with pytest.raises(ValueError):
            check.is_integer(value)
    with pytest.raises(ValueError):
        check.is_integer(0, positive=True)
    check.is_integer(0, positive=False)


def test_point_invalid():
    "points have two finite coordinates"
    check.is_point(np.array([1.0, 2.0]))
    for point in [(1.0,), (1.0, 2.0, 3.0), (1.0, np.nan), "ab", 1.0]:
        with pytest.raises(ValueError):
            check.is_point(point)


def test_region_invalid():
    "check if invalid regions raise errors"
    check.is_region([-1.0, 1.0, -2.0, 2.0])
    for region in [
        (-1.0, 1.0, -1.0, 1.0),
        [-1.0, 1.0, -1.0],
        [1.0, -1.0, -1.0, 1.0],
        [-1.0, 1.0, 1.0, 1.0],
        [-np.inf, 1.0, -1.0, 1.0],
    ]:
        with pytest.raises(ValueError):
            check.is_region(region)


def test_shape_invalid():
    "check if invalid shapes raise errors"
    check.is_shape((3, 4))
    for shape in [[3, 4], (3,), (3, 0), (3.0, 4)]:
        with pytest.raises(ValueError):
            check.is_shape(shape)


def test_array_invalid():
    "check ndim and shape of numpy arrays"
    check.is_array(np.zeros((2, 3)), ndim=2, shape=(2, 3))
    with pytest.raises(ValueError):
        check.is_array([1.0, 2.0])
    with pytest.raises(ValueError):
        check.is_array(np.zeros(3), ndim=2)
    with pytest.raises(ValueError):
        check.is_array(np.zeros((2, 3)), shape=(3, 2))


##### grids and polygons


def test_scalar_grid():
    "scalar grids return their number of nodes and reject inconsistent values"
    grid = data_structures.region_grid([0.0, 1.0, 0.0, 2.0], (3, 5))
    H = data_structures.scalar_grid(grid, np.zeros((3, 5)))
    assert check.is_scalar_grid(H) == 15
    with pytest.raises(ValueError):
        data_structures.scalar_grid(grid, np.zeros((5, 3)))


def test_polygon():
    "polygons are counterclockwise (N, 2) arrays with N >= 3"
    square = np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])
    assert check.is_polygon(square) == 4
    with pytest.raises(ValueError):
        check.is_polygon(square[::-1])
    with pytest.raises(ValueError):
        check.is_polygon(square[:2])
    with pytest.raises(ValueError):
        check.is_polygon(square.T)
    bad = square.copy()
    bad[0, 0] = np.nan
    with pytest.raises(ValueError):
        check.is_polygon(bad)
