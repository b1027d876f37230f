"""
Poincare return maps on ray sections, detection of isolated cycles and
neutral (period annulus) bands, and the outer boundary of a period annulus.
"""

import warnings
import numpy as np
from scipy.optimize import brentq
from . import check, data_structures, flow, field as fld
from . import constants as cts
from .intervals import EnclosureError


class NoInwardRegimeError(RuntimeError):
    """
    Raised by ``annulus_boundary`` when no orbit returns strictly inward up to
    the largest scanned radius (the center may be global).
    """


def return_map(field, section, r, config=None, check_input=True):
    """
    First return of the orbit through base + r * direction to the section
    ray, crossing it transversally with the orientation of the flow at the
    starting point.

    parameters
    ----------
    field : dictionary
        Field definition.
    section : dictionary
        Output of 'data_structures.section'.
    r : positive scalar
        Starting parameter on the ray.
    config : dictionary or None
        Integrator settings.
    check_input : boolean
        If True, verify if the input is valid. Default is True.

    returns
    -------
    sample : dictionary containing the following keys
        'r_in' : float
        'r_out' : float or None, parameter of the return point
        'flight_time' : float or None
        'status' : 'OK', 'NOT_FOUND' or 'BLOWUP'
    """
    sample, _ = _return(field, section, r, config, check_input)
    return sample


def _return(field, section, r, config, check_input=True):
    config = data_structures.integrator_config() if config is None else config
    if check_input is True:
        check.is_field(field)
        check.is_section(section)
        check.is_scalar(r, positive=True)
        check.is_integrator_config(config)
    base, d = section["base"], section["direction"]
    x0 = (float(base[0] + r * d[0]), float(base[1] + r * d[1]))
    event = data_structures.ray_crossing_event(section, check_input=False)
    result = flow.integrate_until_event(field, x0, event, config, check_input=False)
    if result["status"] != "EVENT":
        status = "BLOWUP" if result["status"] == "BLOWUP" else "NOT_FOUND"
        return {"r_in": float(r), "r_out": None, "flight_time": None, "status": status}, result
    state = result["state"]
    r_out = d[0] * (state[0] - base[0]) + d[1] * (state[1] - base[1])
    sample = {
        "r_in": float(r),
        "r_out": float(r_out),
        "flight_time": result["time"],
        "status": "OK",
    }
    return sample, result


def displacement(sample):
    """
    Displacement g(r) = r_out - r_in of a return sample (None when the orbit
    did not return).
    """
    if sample["status"] != "OK":
        return None
    return sample["r_out"] - sample["r_in"]


def return_profile(field, section, radii, config=None, check_input=True):
    """
    Return samples for a sequence of starting parameters.
    """
    if check_input is True:
        check.is_field(field)
        check.is_section(section)
    return [
        return_map(field, section, float(r), config, check_input=check_input)
        for r in radii
    ]


def detect_cycles(
    field, section, r_range, grid_n=64, tol_fixed=cts.TOL_FIXED, config=None, check_input=True
):
    """
    Detect cycles crossing a section from the displacement g(r) = r_out - r
    sampled on a regular grid of starting parameters.

    Maximal runs of samples with |g| <= tol_fixed are reported as neutral
    bands (continua of cycles). Sign changes between consecutive samples
    with |g| > tol_fixed are refined by Brent's method into isolated fixed
    points, classified by the signs of g on both sides: attracting when
    g > 0 on the left and g < 0 on the right, repelling otherwise. Where an
    orbit does not return next to one that does, the pair is bracketed with
    the time-reversed field -F, for which a repelling cycle attracts and
    both neighbours return.

    parameters
    ----------
    field : dictionary
        Field definition.
    section : dictionary
        Output of 'data_structures.section'.
    r_range : sequence of 2 positive floats
        Sampled interval of parameters.
    grid_n : int
        Number of grid samples (at least 2).
    tol_fixed : positive scalar
        Neutrality threshold on |g|.
    config : dictionary or None
        Integrator settings.
    check_input : boolean
        If True, verify if the input is valid. Default is True.

    returns
    -------
    result : dictionary containing the following keys
        'isolated' : list of dictionaries with keys 'r' and 'stability'
            ('ATTRACTING' or 'REPELLING')
        'neutral_bands' : list of [r_lo, r_hi]
        'samples' : list of return samples on the grid
        'not_found' : list of grid parameters without return
    """
    if check_input is True:
        check.is_field(field)
        check.is_section(section)
        if len(r_range) != 2 or not (0 < r_range[0] < r_range[1]):
            raise ValueError("r_range must be an increasing pair of positive numbers")
        check.is_integer(grid_n, positive=True)
        if grid_n < 2:
            raise ValueError("grid_n must be at least 2")
        check.is_scalar(tol_fixed, positive=True)
    radii = np.linspace(r_range[0], r_range[1], grid_n)
    samples = return_profile(field, section, radii, config, check_input=False)
    g = [displacement(s) for s in samples]
    not_found = [s["r_in"] for s in samples if s["status"] != "OK"]
    if not_found:
        warnings.warn(
            "{} of {} orbits did not return to the section".format(len(not_found), grid_n)
        )

    bands = []
    start = None
    for k, gk in enumerate(g):
        neutral = gk is not None and abs(gk) <= tol_fixed
        if neutral and start is None:
            start = k
        if (neutral is False) and (start is not None):
            bands.append([float(radii[start]), float(radii[k - 1])])
            start = None
    if start is not None:
        bands.append([float(radii[start]), float(radii[-1])])

    def g_of(r, flow_field=field):
        value = displacement(return_map(flow_field, section, r, config, check_input=False))
        if value is None:
            raise ValueError("orbit from r = {} did not return".format(r))
        return value

    def refine(flow_field, k):
        try:
            return float(brentq(g_of, radii[k], radii[k + 1], args=(flow_field,), xtol=1e-10))
        except ValueError:
            return None

    isolated = []
    reversed_field = None
    for k in range(grid_n - 1):
        left, right = g[k], g[k + 1]
        if left is None and right is None:
            continue
        if left is None or right is None:
            # orbits escaping next to returning ones: a cycle separating them
            # swaps its stability under the time-reversed flow, where both
            # sides return
            if reversed_field is None:
                reversed_field = fld.time_reversed(field)
            ends = return_profile(
                reversed_field, section, radii[k : k + 2], config, check_input=False
            )
            left, right = [displacement(s) for s in ends]
            if left is None or right is None:
                continue
            if abs(left) <= tol_fixed or abs(right) <= tol_fixed or left * right >= 0:
                continue
            r_star = refine(reversed_field, k)
            if r_star is not None:
                stability = "REPELLING" if left > 0 else "ATTRACTING"
                isolated.append({"r": r_star, "stability": stability})
            continue
        if abs(left) <= tol_fixed or abs(right) <= tol_fixed:
            continue
        if left * right < 0:
            r_star = refine(field, k)
            if r_star is not None:
                stability = "ATTRACTING" if left > 0 else "REPELLING"
                isolated.append({"r": r_star, "stability": stability})

    return {
        "isolated": isolated,
        "neutral_bands": bands,
        "samples": samples,
        "not_found": not_found,
    }


##### period annulus boundary


def _tube_trace_zero(field, trajectory, n, width, tol, levels=6):
    """
    True when |T| <= tol is certified on boxes covering the orbit. The orbit
    is cut into n segments at equally spaced times; each segment is covered
    by its bounding box padded by width, and a segment whose box fails is
    halved (new points from the dense output) up to ``levels`` times.
    """
    times, states = flow.sample_trajectory(trajectory, n + 1, check_input=False)

    def covered(ta, tb, a, b, level):
        box = [
            min(a[0], b[0]) - width,
            max(a[0], b[0]) + width,
            min(a[1], b[1]) - width,
            max(a[1], b[1]) + width,
        ]
        try:
            T = fld.interval_jet(field, box, check_input=False)["trace"]
            if max(abs(T.lo), abs(T.hi)) <= tol:
                return True
        except EnclosureError:
            pass
        if level == 0:
            return False
        tm = 0.5 * (ta + tb)
        m = flow.dense_states(trajectory, [tm])[0]
        return covered(ta, tm, a, m, level - 1) and covered(tm, tb, m, b, level - 1)

    for k in range(n):
        if not covered(times[k], times[k + 1], states[k], states[k + 1], levels):
            return False
    return True


def annulus_boundary(
    field,
    center,
    config=None,
    r_max=5.0,
    direction=(1.0, 0.0),
    n_scan=16,
    tol_fixed=cts.TOL_FIXED,
    bracket_width=cts.BRACKET_WIDTH,
    tube_width=cts.TUBE_WIDTH,
    tube_tol=cts.TUBE_TRACE_TOL,
    n_segments=1024,
    n_cycle=256,
    check_input=True,
):
    """
    Estimate the outer boundary of the period annulus of a center.

    The ray from the center along ``direction`` is scanned for the first
    parameter whose orbit returns strictly inward (g < -tol_fixed); the
    interval between the last neutral parameter and that one is bisected
    down to bracket_width. When the trace certifiably vanishes on a tube
    around the innermost scanned orbit, the boundary is then located again
    by bisection on the predicate "the trace is identically zero (|T| <=
    tube_tol) on a tube of half width tube_width around the orbit", down to
    bracket_width. This finds the boundary where the return map is too flat
    to be resolved by its displacement. A tube around an orbit at distance
    d inside the boundary needs about pi / d boxes, so the cost grows as
    the bracket shrinks.

    parameters
    ----------
    field : dictionary
        Field definition.
    center : sequence of 2 floats
        Center-type critical point.
    config : dictionary or None
        Integrator settings.
    r_max : positive scalar
        Largest scanned parameter.
    direction : sequence of 2 floats
        Direction of the section ray.
    n_scan : int
        Number of scanned parameters in (0, r_max].
    tol_fixed : positive scalar
        Neutrality threshold on |g|.
    bracket_width : positive scalar
        Width of the returned bracket.
    tube_width : positive scalar
        Half width of the tube boxes.
    tube_tol : non-negative scalar
        Trace tolerance on the tube (0 demands an exactly zero enclosure).
    n_segments : int
        Number of orbit segments covered by tube boxes (before halving).
    n_cycle : int
        Number of points of the returned cycle polyline.
    check_input : boolean
        If True, verify if the input is valid. Default is True.

    returns
    -------
    result : dictionary containing the following keys
        'radius' : float, boundary parameter (midpoint of the bracket)
        'band' : [r_lo, r_hi], bracket of width <= bracket_width
        'method' : 'trace_tube' or 'return_map'
        'return_map_band' : bracket from the displacement bisection
        'cycle' : numpy array 2d, the orbit through r_lo sampled at n_cycle points
        'direction' : tuple, unit direction of the section

    Raises ``NoInwardRegimeError`` when no inward return exists up to r_max.
    """
    config = data_structures.integrator_config() if config is None else config
    if check_input is True:
        check.is_field(field)
        check.is_point(center)
        check.is_integrator_config(config)
        check.is_scalar(r_max, positive=True)
        check.is_integer(n_scan, positive=True)
        check.is_integer(n_segments, positive=True)
        check.is_integer(n_cycle, positive=True)
        check.is_scalar(tol_fixed, positive=True)
        check.is_scalar(bracket_width, positive=True)
        check.is_scalar(tube_width, positive=True)
        check.is_scalar(tube_tol, positive=False)
        if tube_tol < 0:
            raise ValueError("tube_tol must be non-negative")
    section = data_structures.section(center, direction)

    def g_of(r):
        return displacement(_return(field, section, r, config, check_input=False)[0])

    # scan for the first inward return
    radii = r_max * np.arange(1, n_scan + 1) / n_scan
    lo, hi = None, None
    for k, r in enumerate(radii):
        g = g_of(float(r))
        if g is not None and g < -tol_fixed:
            hi = float(r)
            lo = float(radii[k - 1]) if k > 0 else 0.5 * float(r)
            break
    if hi is None:
        raise NoInwardRegimeError(
            "no orbit returns inward up to r = {} from {}".format(r_max, tuple(center))
        )
    while hi - lo > bracket_width:
        mid = 0.5 * (lo + hi)
        g = g_of(mid)
        if g is not None and g < -tol_fixed:
            hi = mid
        else:
            lo = mid
    return_map_band = [lo, hi]

    def tube_ok(r):
        sample, result = _return(field, section, r, config, check_input=False)
        if sample["status"] != "OK":
            return False
        return _tube_trace_zero(
            field, result["trajectory"], n_segments, tube_width, tube_tol
        )

    method = "return_map"
    inner = float(radii[0]) if hi > radii[0] else 0.5 * hi
    if tube_ok(inner):
        method = "trace_tube"
        lo, hi = inner, hi
        while hi - lo > bracket_width:
            mid = 0.5 * (lo + hi)
            if tube_ok(mid):
                lo = mid
            else:
                hi = mid
    _, result = _return(field, section, lo, config, check_input=False)
    return {
        "radius": 0.5 * (lo + hi),
        "band": [lo, hi],
        "method": method,
        "return_map_band": return_map_band,
        "cycle": flow.sample_trajectory(result["trajectory"], n_cycle)[1],
        "direction": tuple(float(v) for v in section["direction"]),
    }
