import numpy as np
from . import check
from . import constants as cts


def integrator_config(
    rtol=cts.RTOL,
    atol=cts.ATOL,
    h_init=cts.H_INIT,
    h_max=cts.H_MAX,
    max_steps=cts.MAX_STEPS,
    t_max=cts.T_MAX,
    check_input=True,
):
    """
    Define the data structure holding the settings of the adaptive integrator.

    parameters
    ----------
    rtol, atol : positive scalars
        Relative and absolute local error tolerances.
    h_init, h_max : positive scalars
        Initial and maximum step sizes (h_init <= h_max).
    max_steps : positive int
        Maximum number of accepted steps.
    t_max : positive scalar
        Maximum integration time (absolute value).
    check_input : boolean
        If True, verify if the input is valid. Default is True.

    returns
    -------
    config : dictionary
        Dictionary with the keys 'rtol', 'atol', 'h_init', 'h_max',
        'max_steps' and 't_max'.
    """
    config = {
        "rtol": rtol,
        "atol": atol,
        "h_init": h_init,
        "h_max": h_max,
        "max_steps": max_steps,
        "t_max": t_max,
    }
    if check_input == True:
        check.is_integrator_config(config)

    return config


def section(base, direction, check_input=True):
    """
    Define a Poincare section: the ray {base + s * direction : s > 0}.

    parameters
    ----------
    base : sequence of 2 floats
        Origin of the ray (usually a critical point).
    direction : sequence of 2 floats
        Non-zero direction, normalized on output.
    check_input : boolean
        If True, verify if the input is valid. Default is True.

    returns
    -------
    section : dictionary
        Keys 'base' and 'direction', numpy arrays 1d with 2 elements.
    """
    if check_input == True:
        check.is_point(base)
        check.is_point(direction)
    direction = np.asarray(direction, dtype=float)
    norm = np.hypot(direction[0], direction[1])
    if norm == 0:
        raise ValueError("'direction' must be non-zero")

    return {
        "base": np.asarray(base, dtype=float).copy(),
        "direction": direction / norm,
    }


def region_grid(region, shape, check_input=True):
    """
    Define the data structure for a regular grid of points covering a region.

    parameters
    ----------
    region : list
        List of min x, max x, min y and max y.
    shape : tuple
        Tuple defining the total number of points along x and y directions, respectively.
    check_input : boolean
        If True, verify if the input is valid. Default is True.

    returns
    -------
    grid : dictionary containing the following keys
        'x' : numpy array 1d with shape = (Nx, ).
        'y' : numpy array 1d with shape = (Ny, ).
        'region' : list (the same as input)
        'shape' : tuple (the same as input)
    """
    if check_input == True:
        check.is_region(region)
        check.is_shape(shape)

    return {
        "x": np.linspace(region[0], region[1], shape[0]),
        "y": np.linspace(region[2], region[3], shape[1]),
        "region": region,
        "shape": shape,
    }


def region_grid_spacing(region, shape, check_input=True):
    """
    Compute the grid spacing along x and y directions.

    parameters
    ----------
    region : list
        List of min x, max x, min y and max y.
    shape : tuple
        Tuple defining the total number of points along x and y directions,
        respectively. Both must be greater than 1.
    check_input : boolean
        If True, verify if the input is valid. Default is True.

    returns
    -------
    spacing : tuple
        Grid spacing along x and y directions.
    """
    if check_input == True:
        check.is_region(region)
        check.is_shape(shape)
        if (shape[0] < 2) or (shape[1] < 2):
            raise ValueError("shape must have at least 2 points per direction")

    dx = (region[1] - region[0]) / (shape[0] - 1)
    dy = (region[3] - region[2]) / (shape[1] - 1)

    return dx, dy


def scalar_grid(grid, values, check_input=True):
    """
    Attach the values of a scalar function (indexed [i, j] <-> (x[i], y[j]))
    to a grid created by 'region_grid'.

    returns
    -------
    scalar_grid : dictionary
        Keys 'x', 'y', 'values', 'region' and 'shape'.
    """
    result = {
        "x": grid["x"],
        "y": grid["y"],
        "values": values,
        "region": grid["region"],
        "shape": grid["shape"],
    }
    if check_input == True:
        check.is_scalar_grid(result)

    return result


def circle_polygon(center, radius, n, check_input=True):
    """
    Regular counterclockwise polygon with n vertices inscribed in a circle.

    parameters
    ----------
    center : sequence of 2 floats
        Center of the circle.
    radius : positive scalar
        Circle radius.
    n : int
        Number of vertices (at least 3).
    check_input : boolean
        If True, verify if the input is valid. Default is True.

    returns
    -------
    polygon : numpy array 2d
        Vertices with shape (n, 2).
    """
    if check_input == True:
        check.is_point(center)
        check.is_scalar(radius, positive=True)
        check.is_integer(n, positive=True)
        if n < 3:
            raise ValueError("n must be at least 3")
    theta = 2 * np.pi * np.arange(n) / n
    return np.column_stack(
        [center[0] + radius * np.cos(theta), center[1] + radius * np.sin(theta)]
    )


def rectangle_polygon(region, n_per_side=1, check_input=True):
    """
    Counterclockwise polygon following the boundary of a rectangle, with
    n_per_side edges along each side.

    returns
    -------
    polygon : numpy array 2d
        Vertices with shape (4 * n_per_side, 2), starting at (min x, min y).
    """
    if check_input == True:
        check.is_region(region)
        check.is_integer(n_per_side, positive=True)
    xmin, xmax, ymin, ymax = region
    s = np.arange(n_per_side) / n_per_side
    sides = [
        np.column_stack([xmin + (xmax - xmin) * s, np.full(n_per_side, ymin)]),
        np.column_stack([np.full(n_per_side, xmax), ymin + (ymax - ymin) * s]),
        np.column_stack([xmax - (xmax - xmin) * s, np.full(n_per_side, ymax)]),
        np.column_stack([np.full(n_per_side, xmin), ymax - (ymax - ymin) * s]),
    ]
    return np.vstack(sides)


def star_polygon(center, radii, check_input=True):
    """
    Counterclockwise star-shaped polygon whose k-th vertex lies at angle
    2 pi k / N and distance radii[k] from the center. Star-shaped polygons
    with positive radii are simple.

    parameters
    ----------
    center : sequence of 2 floats
        Star center.
    radii : numpy array 1d
        Positive distances of the N >= 3 vertices.
    check_input : boolean
        If True, verify if the input is valid. Default is True.

    returns
    -------
    polygon : numpy array 2d
        Vertices with shape (N, 2).
    """
    if check_input == True:
        check.is_point(center)
        check.is_array(radii, ndim=1)
        if radii.size < 3:
            raise ValueError("radii must have at least 3 elements")
        if np.any(radii <= 0):
            raise ValueError("radii must be positive")
    theta = 2 * np.pi * np.arange(radii.size) / radii.size
    return np.column_stack(
        [center[0] + radii * np.cos(theta), center[1] + radii * np.sin(theta)]
    )


def random_polygon(center, mean_radius, n, rng, roughness=0.3, check_input=True):
    """
    Random star-shaped counterclockwise polygon with radii drawn uniformly in
    mean_radius * [1 - roughness, 1 + roughness].

    parameters
    ----------
    center : sequence of 2 floats
        Star center.
    mean_radius : positive scalar
        Mean distance of the vertices.
    n : int
        Number of vertices (at least 3).
    rng : numpy.random.Generator
        Source of randomness.
    roughness : scalar in [0, 1)
        Relative spread of the radii. Default is 0.3.
    check_input : boolean
        If True, verify if the input is valid. Default is True.
    """
    if check_input == True:
        check.is_scalar(mean_radius, positive=True)
        check.is_integer(n, positive=True)
        check.is_scalar(roughness, positive=False)
        if (roughness < 0) or (roughness >= 1):
            raise ValueError("roughness must lie in [0, 1)")
    radii = mean_radius * rng.uniform(1 - roughness, 1 + roughness, size=n)
    return star_polygon(center, radii, check_input=check_input)


def ray_crossing_event(section, orientation=None, check_input=True):
    """
    Event fired when an orbit crosses the ray of a section transversally.

    parameters
    ----------
    section : dictionary
        Output of 'data_structures.section'.
    orientation : None, 1 or -1
        Sign of cross(direction, F) required at the crossing. If None, the
        sign at the initial point is used. Default is None.
    check_input : boolean
        If True, verify if the input is valid. Default is True.
    """
    event = {"kind": "RAY_CROSSING", "section": section, "orientation": orientation}
    if check_input == True:
        check.is_event(event)
    return event


def enter_ball_event(center, radius, check_input=True):
    """
    Event fired when an orbit enters the closed ball of given center and radius.
    """
    event = {
        "kind": "ENTER_BALL",
        "center": (float(center[0]), float(center[1])),
        "radius": radius,
    }
    if check_input == True:
        check.is_event(event)
    return event


def exit_box_event(region, check_input=True):
    """
    Event fired when an orbit leaves a rectangle [xmin, xmax, ymin, ymax].
    """
    event = {"kind": "EXIT_BOX", "region": region}
    if check_input == True:
        check.is_event(event)
    return event
