"""
Classification of a critical point of a field satisfying the stability
hypotheses (D > 0, T <= 0, no real positive eigenvalue) into a global center,
a globally attracting point or a center surrounded by a compact attractor.
"""

import warnings
import numpy as np
from . import check, data_structures, flow, hamiltonian, poincare, verify, field as fld
from . import constants as cts


VERDICTS = (
    "GLOBAL_CENTER",
    "GAS_POINT",
    "CENTER_WITH_COMPACT_ATTRACTOR",
    "HYPOTHESES_NOT_CERTIFIED",
)


def sampling_config(t_max=cts.T_MAX):
    """
    Integrator settings for the empirical attraction checks, looser than the
    defaults since these orbits only decide where orbits go.
    """
    return data_structures.integrator_config(
        rtol=cts.SAMPLING_RTOL, atol=cts.SAMPLING_ATOL, h_max=cts.SAMPLING_H_MAX, t_max=t_max
    )


def _starts(point, radii, n_angles):
    theta = 2 * np.pi * np.arange(n_angles) / n_angles
    return [
        (float(point[0] + r * np.cos(t)), float(point[1] + r * np.sin(t)))
        for r in radii
        for t in theta
    ]


def verify_gas_empirically(
    field, point, radii, n_angles, ball=cts.GAS_BALL, config=None, check_input=True
):
    """
    Launch orbits from the points at the given distances and n_angles equally
    spaced angles around a critical point and count those entering the closed
    ball of radius ``ball`` around it before config['t_max'].

    The outcome is empirical: orbits that do not enter are witnesses of
    failure of the sampling, not a disproof of global attraction.

    parameters
    ----------
    field : dictionary
        Field definition.
    point : sequence of 2 floats
        Critical point.
    radii : sequence of positive floats
        Distances of the starting points.
    n_angles : int
        Number of starting angles per distance.
    ball : positive scalar
        Radius of the target ball.
    config : dictionary or None
        Integrator settings. Default is ``sampling_config()``.
    check_input : boolean
        If True, verify if the input is valid. Default is True.

    returns
    -------
    result : dictionary containing the following keys
        'converged' : int
        'total' : int
        'max_entry_time' : float or None
        'failures' : list of starting points whose orbits did not enter
        'ball' : float
    """
    config = sampling_config() if config is None else config
    if check_input is True:
        check.is_field(field)
        check.is_point(point)
        for r in radii:
            check.is_scalar(r, positive=True)
        check.is_integer(n_angles, positive=True)
        check.is_scalar(ball, positive=True)
        check.is_integrator_config(config)
    event = data_structures.enter_ball_event(point, ball, check_input=False)
    converged = 0
    failures = []
    max_time = None
    starts = _starts(point, radii, n_angles)
    for x0 in starts:
        result = flow.integrate_until_event(field, x0, event, config, check_input=False)
        if result["status"] == "EVENT":
            converged += 1
            max_time = result["time"] if max_time is None else max(max_time, result["time"])
        else:
            failures.append(x0)
    return {
        "converged": converged,
        "total": len(starts),
        "max_entry_time": max_time,
        "failures": failures,
        "ball": float(ball),
    }


def attractor_approach(
    field, point, radius, radii, n_angles=4, t=cts.SAMPLING_TIME, config=None, check_input=True
):
    """
    Integrate orbits started outside a boundary cycle of given radius and
    record whether their distance to the center decreases while staying
    outside the cycle.

    returns
    -------
    result : dictionary containing the following keys
        'starts' : list of starting points
        'final_distance' : list of floats
        'min_distance' : list of floats, smallest distance along each orbit
        'decreasing' : boolean, every final distance is below the initial one
        'outside' : boolean, no orbit comes closer than radius - 1e-3
    """
    config = sampling_config() if config is None else config
    if check_input is True:
        check.is_field(field)
        check.is_point(point)
        check.is_scalar(radius, positive=True)
        check.is_integer(n_angles, positive=True)
        check.is_scalar(t, positive=True)
    starts = _starts(point, radii, n_angles)
    final, closest = [], []
    for x0 in starts:
        trajectory = flow.integrate(field, x0, t, config, check_input=False)
        _, states = flow.sample_trajectory(trajectory, 512, check_input=False)
        distance = np.hypot(states[:, 0] - point[0], states[:, 1] - point[1])
        final.append(float(distance[-1]))
        closest.append(float(distance.min()))
    initial = [float(r) for r in radii for _ in range(n_angles)]
    return {
        "starts": starts,
        "final_distance": final,
        "min_distance": closest,
        "decreasing": all(f < r for f, r in zip(final, initial)),
        "outside": all(c > radius - cts.BRACKET_WIDTH for c in closest),
    }


def _distance_to_edge(point, region):
    return min(
        point[0] - region[0], region[1] - point[0], point[1] - region[2], region[3] - point[1]
    )


def classify_critical_point(
    field,
    point,
    region,
    config=None,
    max_depth=cts.MAX_DEPTH,
    tol=cts.TRACE_TOL,
    k_radius=None,
    gas_radii=None,
    gas_angles=8,
    gas_ball=cts.GAS_BALL,
    gas_config=None,
    check_input=True,
):
    """
    Classify a critical point of a field over a verification region.

    The hypotheses are certified on the region first; a violation stops the
    pipeline. A point in the closure of the negative-trace set is globally
    asymptotically stable. Otherwise the trace vanishes near the point and it
    is a center: global when the field is declared analytic, and surrounded
    by a compact attractor (bounded by the outer cycle of its period annulus)
    when an inward return exists. Without any inward return up to the region
    edge the center is reported as global within the region.

    parameters
    ----------
    field : dictionary
        Field definition.
    point : sequence of 2 floats
        Critical point (|F| < constants.NEWTON_TOL) inside the region.
    region : list
        Verification rectangle [xmin, xmax, ymin, ymax].
    config : dictionary or None
        Integrator settings of the return map computations.
    max_depth, tol, k_radius : see ``verify.verify_property``.
    gas_radii : sequence of floats or None
        Starting distances of the attraction sampling. Default is 1/10, 1/2 and
        1 times the distance from the point to the region edge.
    gas_angles : int
        Starting angles per distance of the attraction sampling.
    gas_ball : positive scalar
        Target ball radius of the attraction sampling.
    gas_config : dictionary or None
        Integrator settings of the sampled orbits. Default is ``sampling_config()``.
    check_input : boolean
        If True, verify if the input is valid. Default is True.

    returns
    -------
    classification : dictionary containing the following keys
        'verdict' : one of ``VERDICTS``
        'point' : tuple
        'region' : list, the region every global claim is qualified by
        'analytic_used' : boolean
        'region_limited' : boolean
        'attractor_radius' : float or None
        'evidence' : dictionary of sub-reports
        'notes' : list of strings
    """
    config = data_structures.integrator_config() if config is None else config
    gas_config = sampling_config() if gas_config is None else gas_config
    if check_input is True:
        check.is_field(field)
        check.is_point(point)
        check.is_region(region)
        check.is_integrator_config(config)
        check.is_integrator_config(gas_config)
        if not (region[0] < point[0] < region[1] and region[2] < point[1] < region[3]):
            raise ValueError("point must lie inside the region")
    point = (float(point[0]), float(point[1]))
    speed = float(np.hypot(*fld.eval_velocity(field, point, check_input=False)))
    if speed >= cts.NEWTON_TOL:
        raise ValueError("|F| = {} at {}: not a critical point".format(speed, point))

    notes = []
    evidence = {}
    result = {
        "verdict": "HYPOTHESES_NOT_CERTIFIED",
        "point": point,
        "region": list(region),
        "analytic_used": False,
        "region_limited": False,
        "attractor_radius": None,
        "evidence": evidence,
        "notes": notes,
    }

    reports = verify.verify_hypotheses(
        field, region, max_depth=max_depth, tol=tol, k_radius=k_radius, check_input=False
    )
    evidence["hypotheses"] = reports
    evidence["boundary_growth"] = verify.boundary_growth(field, region, check_input=False)
    violated = [r["property"] for r in reports if r["status"] == "VIOLATED"]
    if violated:
        notes.append("violated: {}".format(", ".join(violated)))
        return result
    sampled = [r["property"] for r in reports if r["status"] == "SAMPLED_OK"]
    if sampled:
        notes.append("sampled only (not certified) on part of the region: {}".format(
            ", ".join(sampled)
        ))

    closure = verify.in_closure_T_minus(
        field, point, tol=tol, max_depth=max_depth, check_input=False
    )
    near = closure["trace_near"]
    if near is None:
        near = verify.trace_vanishes_near(
            field, point, cts.R_MIN, tol=tol, max_depth=max_depth, check_input=False
        )
    evidence["closure_T_minus"] = {k: closure[k] for k in ("in_closure", "witness", "scales")}
    evidence["trace_near"] = near

    if closure["in_closure"] is None:
        notes.append("neither criterion decided at {}".format(point))
        return result

    if closure["in_closure"] is True:
        radii = gas_radii
        if radii is None:
            d = _distance_to_edge(point, region)
            radii = [0.1 * d, 0.5 * d, d]
        gas = verify_gas_empirically(
            field, point, radii, gas_angles, gas_ball, gas_config, check_input=check_input
        )
        evidence["gas_sampling"] = gas
        if gas["converged"] < gas["total"]:
            notes.append(
                "{} of {} sampled orbits did not enter the ball".format(
                    gas["total"] - gas["converged"], gas["total"]
                )
            )
            warnings.warn(notes[-1])
        result["verdict"] = "GAS_POINT"
        return result

    evidence["hessian"] = hamiltonian.hessian_extremum(field, point, check_input=False)
    if field["analytic"] is True:
        result["verdict"] = "GLOBAL_CENTER"
        result["analytic_used"] = True
        return result

    r_max = _distance_to_edge(point, region)
    try:
        annulus = poincare.annulus_boundary(field, point, config, r_max=r_max, check_input=False)
    except poincare.NoInwardRegimeError as error:
        notes.append("{}; center is global within the region only".format(error))
        warnings.warn(notes[-1])
        result["verdict"] = "GLOBAL_CENTER"
        result["region_limited"] = True
        return result
    evidence["annulus"] = annulus
    radius = annulus["radius"]
    approach_radii = [r for r in (1.5 * radius, 2.0 * radius) if r <= r_max]
    if approach_radii:
        evidence["attractor_approach"] = attractor_approach(
            field, point, radius, approach_radii, config=gas_config, check_input=False
        )
    result["verdict"] = "CENTER_WITH_COMPACT_ATTRACTOR"
    result["attractor_radius"] = radius
    result["region_limited"] = True
    notes.append(
        "the trace is only known not to vanish identically within {}".format(list(region))
    )
    return result
