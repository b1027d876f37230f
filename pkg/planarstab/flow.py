"""
Numerical flow of planar fields: adaptive Dormand-Prince 5(4) integration
with dense output, event location on the dense output, transport of
polygons and the Liouville area identity dA/dt = integral of T.
"""

import math
import numpy as np
from scipy.integrate import RK45
from scipy.optimize import brentq
from . import check, data_structures, utils, field as fld
from . import constants as cts


def _rhs(field, backward):
    """
    Right-hand side for scipy's steppers. Backward time integrates -F.
    The state may stack several points as [x_1 .. x_N, y_1 .. y_N].
    """
    p, q = fld.compile_field(field)
    sign = -1.0 if backward else 1.0

    def rhs(t, state):
        n = state.size // 2
        if n == 1:
            x, y = state[0], state[1]
            return sign * np.array([p(x, y), q(x, y)], dtype=float)
        x, y = state[:n], state[n:]
        return sign * np.concatenate(
            [
                np.broadcast_to(np.asarray(p(x, y), dtype=float), (n,)),
                np.broadcast_to(np.asarray(q(x, y), dtype=float), (n,)),
            ]
        )

    return rhs


def _march(field, state0, t_bound, config, backward, stop=None):
    """
    Advance the Dormand-Prince stepper until t_bound, a blow-up, the step
    limit or until ``stop(t_old, t_new, interpolant)`` returns a result.

    returns
    -------
    times, states, dense, status, n_steps, hit
    """
    with np.errstate(all="ignore"):
        solver = RK45(
            _rhs(field, backward),
            0.0,
            np.array(state0, dtype=float),
            t_bound,
            rtol=config["rtol"],
            atol=config["atol"],
            max_step=config["h_max"],
            first_step=min(config["h_init"], t_bound),
        )
        times = [0.0]
        states = [solver.y.copy()]
        dense = []
        status = "COMPLETED"
        steps = 0
        while solver.status == "running":
            if steps >= config["max_steps"]:
                status = "STEP_LIMIT"
                break
            solver.step()
            steps += 1
            if solver.status == "failed":
                status = "STEP_LIMIT"
                break
            state = solver.y.copy()
            size = np.max(np.abs(state)) if state.size else 0.0
            times.append(solver.t)
            states.append(state)
            if (np.all(np.isfinite(state)) == False) or (size > cts.BLOWUP_RADIUS):
                status = "BLOWUP"
                break
            interpolant = solver.dense_output()
            dense.append(interpolant)
            if stop is not None:
                hit = stop(solver.t_old, solver.t, interpolant)
                if hit is not None:
                    return times, states, dense, "EVENT", steps, hit
    return times, states, dense, status, steps, None


def integrate(field, x0, t_end, config=None, backward=False, check_input=True):
    """
    Integrate the flow of a field from a point, with an adaptive embedded
    Runge-Kutta pair of orders 5(4) (Dormand-Prince) and per-step error
    control err <= atol + rtol * |state|.

    parameters
    ----------
    field : dictionary
        Field definition.
    x0 : sequence of 2 floats
        Initial point.
    t_end : positive scalar
        Final time.
    config : dictionary or None
        Output of 'data_structures.integrator_config'. If None, the defaults
        of ``constants`` are used.
    backward : boolean
        If True, integrate backward in time (flow of -F). Default is False.
    check_input : boolean
        If True, verify if the input is valid. Default is True.

    returns
    -------
    trajectory : dictionary containing the following keys
        't' : numpy array 1d of strictly increasing times (of the flow of -F
            when backward is True)
        'states' : numpy array 2d with shape (N, 2)
        'dense' : list of scipy dense-output interpolants, one per step
        'status' : 'COMPLETED', 'STEP_LIMIT' or 'BLOWUP'
        'n_steps' : int
        'backward' : boolean
    """
    config = data_structures.integrator_config() if config is None else config
    if check_input is True:
        check.is_field(field)
        check.is_point(x0)
        check.is_scalar(t_end, positive=True)
        check.is_integrator_config(config)
    times, states, dense, status, steps, _ = _march(field, x0, t_end, config, backward)
    return {
        "t": np.array(times),
        "states": np.array(states),
        "dense": dense,
        "status": status,
        "n_steps": steps,
        "backward": backward,
    }


def dense_states(trajectory, times):
    """
    States of a trajectory at arbitrary times within its span, evaluated on
    the dense output of the step containing each time.

    returns
    -------
    states : numpy array 2d with shape (len(times), 2)
    """
    t = trajectory["t"]
    dense = trajectory["dense"]
    times = np.atleast_1d(np.asarray(times, dtype=float))
    if len(dense) == 0:
        return np.repeat(trajectory["states"][:1, :2], times.size, axis=0)
    index = np.clip(np.searchsorted(t, times, side="right") - 1, 0, len(dense) - 1)
    return np.array([dense[i](ti)[:2] for i, ti in zip(index, times)])


def sample_trajectory(trajectory, n, check_input=True):
    """
    Sample a trajectory at n equally spaced times using its dense output.

    returns
    -------
    times, states : numpy arrays with shapes (n,) and (n, 2)
    """
    if check_input is True:
        check.is_integer(n, positive=True)
    t = trajectory["t"]
    if len(trajectory["dense"]) == 0:
        return t[:1].copy(), trajectory["states"][:1, :2].copy()
    times = np.linspace(t[0], t[len(trajectory["dense"])], n)
    return times, dense_states(trajectory, times)


##### events


def _event_function(field, event, x0):
    """
    Scalar function g(state) and the required sign change for an event.
    Returns (g, direction, on_event) where a crossing is a change of
    direction * g from negative to non-negative and ``on_event(state)``
    validates a located root.
    """
    if event["kind"] == "ENTER_BALL":
        c, radius = event["center"], event["radius"]

        def g(state):
            return radius - math.hypot(state[0] - c[0], state[1] - c[1])

        return g, 1.0, lambda state: True

    if event["kind"] == "EXIT_BOX":
        xmin, xmax, ymin, ymax = event["region"]
        xc, yc = 0.5 * (xmin + xmax), 0.5 * (ymin + ymax)
        hx, hy = 0.5 * (xmax - xmin), 0.5 * (ymax - ymin)

        def g(state):
            return max(abs(state[0] - xc) / hx, abs(state[1] - yc) / hy) - 1.0

        return g, 1.0, lambda state: True

    base = event["section"]["base"]
    d = event["section"]["direction"]
    orientation = event["orientation"]
    if orientation is None:
        velocity = fld.eval_velocity(field, x0, check_input=False)
        sign = utils.cross(d, velocity)
        if sign == 0:
            raise ValueError("the flow is tangent to the section at the initial point")
        orientation = 1.0 if sign > 0 else -1.0

    def g(state):
        return d[0] * (state[1] - base[1]) - d[1] * (state[0] - base[0])

    def on_ray(state):
        along = d[0] * (state[0] - base[0]) + d[1] * (state[1] - base[1])
        if along <= 0:
            return False
        velocity = fld.eval_velocity(field, state[:2], check_input=False)
        return orientation * utils.cross(d, velocity) > 0

    return g, float(orientation), on_ray


def integrate_until_event(field, x0, event, config=None, backward=False, check_input=True):
    """
    Integrate from a point until an event happens. The event time is located
    by root finding (Brent) on the dense output of the step where the event
    function changes sign.

    parameters
    ----------
    field : dictionary
        Field definition.
    x0 : sequence of 2 floats
        Initial point.
    event : dictionary
        Output of 'data_structures.ray_crossing_event', 'enter_ball_event' or
        'exit_box_event'. Ray crossings count only when transversal, with
        the required orientation and on the ray itself (s > 0).
    config : dictionary or None
        Integrator settings. The search stops at config['t_max'].
    backward : boolean
        If True, integrate the flow of -F. Default is False.
    check_input : boolean
        If True, verify if the input is valid. Default is True.

    returns
    -------
    result : dictionary containing the following keys
        'state' : (x, y) at the event, or the last computed state
        'time' : float, event time (or last time)
        'status' : 'EVENT', 'NOT_FOUND' (t_max or max_steps reached) or 'BLOWUP'
        'n_steps' : int
        'trajectory' : dictionary as returned by ``integrate``, up to the event
    """
    config = data_structures.integrator_config() if config is None else config
    if check_input is True:
        check.is_field(field)
        check.is_point(x0)
        check.is_event(event)
        check.is_integrator_config(config)
    x0 = (float(x0[0]), float(x0[1]))
    g, direction, valid = _event_function(field, event, x0)

    if event["kind"] != "RAY_CROSSING" and direction * g(x0) >= 0:
        return {
            "state": x0,
            "time": 0.0,
            "status": "EVENT",
            "n_steps": 0,
            "trajectory": {
                "t": np.zeros(1),
                "states": np.array([x0]),
                "dense": [],
                "status": "EVENT",
                "n_steps": 0,
                "backward": backward,
            },
        }

    def stop(t_old, t_new, interpolant):
        g_old = direction * g(interpolant(t_old))
        g_new = direction * g(interpolant(t_new))
        if (g_old < 0) and (g_new >= 0):
            root = brentq(
                lambda t: direction * g(interpolant(t)),
                t_old,
                t_new,
                xtol=cts.EVENT_XTOL,
                rtol=4 * np.finfo(float).eps,
            )
            state = interpolant(root)
            if valid(state):
                return root, state
        return None

    times, states, dense, status, steps, hit = _march(
        field, x0, config["t_max"], config, backward, stop
    )
    if hit is not None:
        time, state = hit
        times[-1] = time
        states[-1] = state
    else:
        time, state = times[-1], states[-1]
        if status != "BLOWUP":
            status = "NOT_FOUND"
    return {
        "state": (float(state[0]), float(state[1])),
        "time": float(time),
        "status": status,
        "n_steps": steps,
        "trajectory": {
            "t": np.array(times),
            "states": np.array(states),
            "dense": dense,
            "status": status,
            "n_steps": steps,
            "backward": backward,
        },
    }


##### polygons


def _transport_points(field, points, t, config, backward):
    n = points.shape[0]
    state0 = np.concatenate([points[:, 0], points[:, 1]])
    times, states, dense, status, steps, _ = _march(field, state0, t, config, backward)
    if status != "COMPLETED":
        raise fld.NonFiniteError(
            "polygon transport stopped with status {} at t = {}".format(status, times[-1])
        )
    final = states[-1]
    return np.column_stack([final[:n], final[n:]])


def transport_polygon(
    field, polygon, t, config=None, max_spacing=None, max_rounds=6, backward=False, check_input=True
):
    """
    Advance every vertex of a polygon by the flow (all vertices are integrated
    as one stacked system). While two adjacent image vertices are farther
    apart than max_spacing, the midpoint of the source edge is inserted and
    transported.

    parameters
    ----------
    field : dictionary
        Field definition.
    polygon : numpy array 2d
        Counterclockwise vertices with shape (N, 2).
    t : positive scalar
        Transport time.
    config : dictionary or None
        Integrator settings.
    max_spacing : None or positive scalar
        Largest accepted distance between adjacent image vertices. If None,
        twice the longest source edge is used.
    max_rounds : int
        Maximum number of insertion rounds.
    backward : boolean
        If True, transport by the flow of -F. Default is False.
    check_input : boolean
        If True, verify if the input is valid. Default is True.

    returns
    -------
    image : numpy array 2d
        Transported vertices with shape (M, 2), M >= N.

    Raises ``field.NonFiniteError`` when a vertex blows up.
    """
    config = data_structures.integrator_config() if config is None else config
    if check_input is True:
        check.is_field(field)
        check.is_polygon(polygon)
        check.is_scalar(t, positive=True)
        check.is_integrator_config(config)
        if max_spacing is not None:
            check.is_scalar(max_spacing, positive=True)
    source = np.array(polygon, dtype=float)
    if max_spacing is None:
        edges = np.roll(source, -1, axis=0) - source
        max_spacing = 2.0 * float(np.max(np.hypot(edges[:, 0], edges[:, 1])))
    image = _transport_points(field, source, t, config, backward)
    for _ in range(max_rounds):
        gaps = np.roll(image, -1, axis=0) - image
        wide = np.nonzero(np.hypot(gaps[:, 0], gaps[:, 1]) > max_spacing)[0]
        if wide.size == 0:
            break
        midpoints = 0.5 * (source[wide] + np.roll(source, -1, axis=0)[wide])
        moved = _transport_points(field, midpoints, t, config, backward)
        source = np.insert(source, wide + 1, midpoints, axis=0)
        image = np.insert(image, wide + 1, moved, axis=0)
    return image


def liouville_residual(
    field, polygon, config=None, h=1e-3, max_edge=None, n_sub=4, check_input=True
):
    """
    Compare the rate of change of the area of a polygon transported by the
    flow with the integral of the trace T over the polygon.

    dA/dt is the central difference of the shoelace areas of the polygon
    transported to t = h and t = -h (vertices added along the edges so that
    none is longer than max_edge). The integral of T uses a fan
    triangulation with a composite degree-5 triangle rule.

    parameters
    ----------
    field : dictionary
        Field definition.
    polygon : numpy array 2d
        Counterclockwise vertices with shape (N, 2).
    config : dictionary or None
        Integrator settings.
    h : positive scalar
        Time step of the central difference. Default is 1e-3.
    max_edge : None or positive scalar
        Longest edge after densification. If None, 1/1024 of the perimeter.
    n_sub : int
        Subdivisions of each side of the quadrature triangles. Default is 4.
    check_input : boolean
        If True, verify if the input is valid. Default is True.

    returns
    -------
    result : dictionary containing the following keys
        'dA_dt' : float
        'integral_T' : float
        'residual' : float, |dA_dt - integral_T|
        'h' : float
        'n_vertices' : int, after densification
    """
    config = data_structures.integrator_config() if config is None else config
    if check_input is True:
        check.is_field(field)
        check.is_polygon(polygon)
        check.is_integrator_config(config)
        check.is_scalar(h, positive=True)
    if max_edge is None:
        edges = np.roll(polygon, -1, axis=0) - polygon
        max_edge = float(np.sum(np.hypot(edges[:, 0], edges[:, 1]))) / 1024
    dense = utils.densify_polygon(polygon, max_edge, check_input=False)
    forward = _transport_points(field, dense, h, config, backward=False)
    backward = _transport_points(field, dense, h, config, backward=True)
    dA_dt = (utils.polygon_area(forward) - utils.polygon_area(backward)) / (2 * h)

    def trace(x, y):
        return fld.jet_arrays(field, x, y, check_input=False)["trace"]

    integral_T = utils.polygon_integral(trace, polygon, n_sub=n_sub, check_input=False)
    return {
        "dA_dt": float(dA_dt),
        "integral_T": float(integral_T),
        "residual": float(abs(dA_dt - integral_T)),
        "h": float(h),
        "n_vertices": int(dense.shape[0]),
    }
