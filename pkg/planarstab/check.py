import numpy as np
from . import dual, expressions


def is_field(field):
    """
    Check if field is a dictionary defining a planar vector field, with the keys
    'name', 'source', 'p_expr', 'q_expr', 'parameters' and 'analytic'.
    See the docstrings of 'field.builtin' and 'field.parse_field'.

    parameters
    ----------
    field : generic object
        Python object to be verified.
    """
    if type(field) != dict:
        raise ValueError("field must be a dictionary")
    if list(field.keys()) != [
        "name",
        "source",
        "p_expr",
        "q_expr",
        "parameters",
        "analytic",
    ]:
        raise ValueError(
            "field must have the following 6 keys: 'name', 'source', 'p_expr', 'q_expr', 'parameters', 'analytic'"
        )
    if field["source"] not in [
        "linear_rotation",
        "cubic_damped",
        "bump_annulus",
        "expression",
    ]:
        raise ValueError("invalid field source {}".format(field["source"]))
    for key in ["p_expr", "q_expr"]:
        if type(field[key]) != tuple:
            raise ValueError("'p_expr' and 'q_expr' must be syntax trees (tuples)")
    if type(field["parameters"]) != dict:
        raise ValueError("'parameters' must be a dictionary")
    if isinstance(field["analytic"], bool) is False:
        raise ValueError("'analytic' must be True or False")
    functions = dict(dual.FUNCTIONS)
    shaped = all(key in field["parameters"] for key in ["r0", "width", "scale"])
    if field["source"] == "bump_annulus" and shaped is False:
        raise ValueError("bump fields need the parameters 'r0', 'width' and 'scale'")
    # the reserved bump function is bound to the shape parameters
    if shaped is True:
        functions["bump"] = None
    for key in ["p_expr", "q_expr"]:
        expressions.check_tree(field[key], field["parameters"], functions)


def is_integrator_config(config):
    """
    Check if config is a dictionary with the keys 'rtol', 'atol', 'h_init',
    'h_max', 'max_steps' and 't_max'. See 'data_structures.integrator_config'.

    parameters
    ----------
    config : generic object
        Python object to be verified.
    """
    if type(config) != dict:
        raise ValueError("config must be a dictionary")
    if list(config.keys()) != ["rtol", "atol", "h_init", "h_max", "max_steps", "t_max"]:
        raise ValueError(
            "config must have the following 6 keys: 'rtol', 'atol', 'h_init', 'h_max', 'max_steps', 't_max'"
        )
    for key in ["rtol", "atol", "h_init", "h_max", "t_max"]:
        is_scalar(config[key], positive=True)
    is_integer(config["max_steps"], positive=True)
    if config["h_init"] > config["h_max"]:
        raise ValueError("'h_init' must not exceed 'h_max'")


def is_section(section):
    """
    Check if section is a dictionary defining a ray with keys 'base' and
    'direction' (unit vector). See 'data_structures.section'.

    parameters
    ----------
    section : generic object
        Python object to be verified.
    """
    if type(section) != dict:
        raise ValueError("section must be a dictionary")
    if list(section.keys()) != ["base", "direction"]:
        raise ValueError("section must have the following 2 keys: 'base', 'direction'")
    is_point(section["base"])
    is_point(section["direction"])
    norm = np.hypot(section["direction"][0], section["direction"][1])
    if abs(norm - 1.0) > 1e-12:
        raise ValueError("'direction' must be a unit vector")


def is_scalar_grid(grid):
    """
    Check if grid is a dictionary containing the keys 'x', 'y', 'values',
    'region' and 'shape'. Keys 'x' and 'y' are numpy arrays 1d with Nx and Ny
    elements and 'values' is a numpy array 2d with shape (Nx, Ny).

    parameters
    ----------
    grid : generic object
        Python object to be verified.

    returns
    -------
    D : int
        Total number of grid nodes.
    """
    if type(grid) != dict:
        raise ValueError("grid must be a dictionary")
    if list(grid.keys()) != ["x", "y", "values", "region", "shape"]:
        raise ValueError(
            "grid must have the following 5 keys: 'x', 'y', 'values', 'region', 'shape'"
        )
    is_array(grid["x"], ndim=1)
    is_array(grid["y"], ndim=1)
    is_shape(grid["shape"])
    is_region(grid["region"])
    if (grid["x"].size, grid["y"].size) != grid["shape"]:
        raise ValueError(
            "number of elements in 'x' and 'y' keys must be consistent with shape key"
        )
    is_array(grid["values"], ndim=2, shape=grid["shape"])
    D = grid["x"].size * grid["y"].size

    return D


def is_scalar(x, positive=False):
    """
    Check if x is a finite float or int (booleans are rejected).

    parameters
    ----------
    x : generic object
        Python object to be verified.
    positive : boolean
        If True, impose that x must be positive. Default is False.
    """
    if isinstance(x, (float, int, np.floating, np.integer)) is False or isinstance(
        x, bool
    ):
        raise ValueError("x must be in float or int")
    if np.isfinite(x) == False:
        raise ValueError("x must be finite")
    if positive == True:
        if x <= 0:
            raise ValueError("x must be positive")


def is_integer(x, positive=True):
    """
    Check if x is an int.

    parameters
    ----------
    x : generic object
        Python object to be verified.
    positive : boolean
        If True, impose that x must be positive.
    """
    if isinstance(x, (int, np.integer)) is False or isinstance(x, bool):
        raise ValueError("x must be an int")
    if positive == True:
        if x < 1:
            raise ValueError("x must be positive")


def is_array(x, ndim=None, shape=None):
    """
    Check if x is a numpy array having specific ndim and shape.

    parameters
    ----------
    x : generic object
        Python object to be verified.
    ndim : int
        Positive integer defining the dimension of x.
        If None, ndim is ignored. Default is None.
    shape : tuple
        Tuple defining the shape of x.
        If None, shape is ignored. Default is None.
    """
    if type(x) != np.ndarray:
        raise ValueError("x must be a numpy array")
    if ndim is not None:
        if x.ndim != ndim:
            raise ValueError(
                "x.ndim ({}) ".format(x.ndim)
                + "not equal to the predefined ndim {}".format(ndim)
            )
    if shape is not None:
        if x.shape != shape:
            raise ValueError(
                "x.shape ({}) ".format(x.shape)
                + "not equal to the predefined shape {}".format(shape)
            )


def is_point(point):
    """
    Check if point is a sequence or numpy array of two finite coordinates.

    parameters
    ----------
    point : generic object
        Python object to be verified.
    """
    if isinstance(point, (tuple, list, np.ndarray)) is False:
        raise ValueError("point must be a tuple, list or numpy array")
    if len(point) != 2:
        raise ValueError("point must have 2 elements")
    for coordinate in point:
        is_scalar(coordinate, positive=False)


def is_region(region):
    """
    Check if region is a list containing finite min x, max x, min y and
    max y coordinates of a bounded rectangle.

    parameters
    ----------
    region : generic object
        Python object to be verified.
    """
    if type(region) != list:
        raise ValueError("'region' must be a list")
    if len(region) != 4:
        raise ValueError("'region' must have 4 elements")
    for item in region:
        is_scalar(item, positive=False)
    if (region[0] >= region[1]) or (region[2] >= region[3]):
        raise ValueError(
            "'region[0]' must be smaller than 'region[1]' and 'region[2]' must be smaller than 'region[3]'"
        )


def is_shape(shape):
    """
    Check is shape is a tuple containing two positive integers.

    parameters
    ----------
    shape : generic object
        Python object to be verified.
    """
    if type(shape) != tuple:
        raise ValueError("'shape' must be a tuple")
    if len(shape) != 2:
        raise ValueError("'shape' must have 2 elements")
    is_integer(x=shape[0], positive=True)
    is_integer(x=shape[1], positive=True)


def is_polygon(polygon):
    """
    Check if polygon is a numpy array 2d with shape (N, 2), N >= 3, holding
    the finite vertices of a simple closed polygon in counterclockwise order
    (positive signed area). The closing edge is implicit.

    parameters
    ----------
    polygon : generic object
        Python object to be verified.

    returns
    -------
    N : int
        Number of vertices.
    """
    is_array(polygon, ndim=2)
    if polygon.shape[1] != 2:
        raise ValueError("polygon must have 2 columns")
    if polygon.shape[0] < 3:
        raise ValueError("polygon must have at least 3 vertices")
    if np.all(np.isfinite(polygon)) == False:
        raise ValueError("polygon vertices must be finite")
    x, y = polygon[:, 0], polygon[:, 1]
    area = 0.5 * np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y)
    if area <= 0:
        raise ValueError("polygon vertices must be in counterclockwise order")

    return polygon.shape[0]


def is_event(event):
    """
    Check if event is a dictionary describing an integration event. Its key
    'kind' is 'RAY_CROSSING' (keys 'section', 'orientation'), 'ENTER_BALL'
    (keys 'center', 'radius') or 'EXIT_BOX' (key 'region').

    parameters
    ----------
    event : generic object
        Python object to be verified.
    """
    if type(event) != dict:
        raise ValueError("event must be a dictionary")
    keys = {
        "RAY_CROSSING": ["kind", "section", "orientation"],
        "ENTER_BALL": ["kind", "center", "radius"],
        "EXIT_BOX": ["kind", "region"],
    }
    if event.get("kind") not in keys:
        raise ValueError("invalid event kind {}".format(event.get("kind")))
    if list(event.keys()) != keys[event["kind"]]:
        raise ValueError(
            "{} event must have the keys {}".format(event["kind"], keys[event["kind"]])
        )
    if event["kind"] == "RAY_CROSSING":
        is_section(event["section"])
        if event["orientation"] not in [None, 1, -1]:
            raise ValueError("'orientation' must be None, 1 or -1")
    elif event["kind"] == "ENTER_BALL":
        is_point(event["center"])
        is_scalar(event["radius"], positive=True)
    else:
        is_region(event["region"])
