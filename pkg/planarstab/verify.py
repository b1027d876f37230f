"""
Certification of the standing hypotheses D > 0, T <= 0 and "no real
positive eigenvalue" over rectangles by interval branch-and-bound, the two
pointwise criteria deciding the nature of a critical point (trace vanishing
on a disk, membership in the closure of {T < 0}), critical point location
and empirical falsification of injectivity.
"""

import math
import warnings
from collections import deque
import numpy as np
from scipy.optimize import minimize, least_squares
from . import check, data_structures, field as fld, utils
from . import constants as cts
from .intervals import EnclosureError


#: Properties certified by ``verify_hypotheses``
PROPERTIES = ("DET_POSITIVE", "TRACE_NONPOSITIVE", "NO_REAL_POSITIVE_EIG")


def _accept(prop, enclosure, tol):
    """
    Margin by which an interval enclosure proves a property, or None.
    """
    T, D = enclosure["trace"], enclosure["det"]
    if prop == "DET_POSITIVE":
        return D.lo if D.lo > 0 else None
    if prop == "TRACE_NONPOSITIVE":
        return -T.hi if T.hi <= tol else None
    # no real eigenvalue >= 0: both roots real and negative, or a complex pair
    if D.lo > 0 and T.hi <= 0:
        return D.lo
    T2 = T**2
    if T2.hi < 4.0 * D.lo:
        return 4.0 * D.lo - T2.hi
    return None


def _pointwise(prop, sample, tol):
    """
    Pointwise margin of a jet sample. Negative margins beyond tol / 2 are
    violations.
    """
    T, D = sample["trace"], sample["det"]
    if prop == "DET_POSITIVE":
        return D
    if prop == "TRACE_NONPOSITIVE":
        return -T
    if T * T >= 4.0 * D:
        return -sample["eig_re"][1]
    return tol


def _violates(prop, margin, tol):
    if prop == "TRACE_NONPOSITIVE":
        return margin < -tol
    return margin < -0.5 * tol


def verify_property(
    field,
    region,
    prop,
    max_depth=cts.MAX_DEPTH,
    tol=cts.TRACE_TOL,
    k_radius=None,
    check_input=True,
):
    """
    Branch-and-bound certification of one hypothesis over a region.

    Boxes are processed breadth first in a canonical order. A box is accepted
    when its interval enclosure proves the property; otherwise the jet at its
    center is checked for a violation and the box is split, down to
    max_depth. Boxes left at max_depth are covered by samples only.

    parameters
    ----------
    field : dictionary
        Field definition.
    region : list
        Rectangle [xmin, xmax, ymin, ymax].
    prop : string
        'DET_POSITIVE', 'TRACE_NONPOSITIVE' or 'NO_REAL_POSITIVE_EIG'.
    max_depth : int
        Maximum number of box subdivisions.
    tol : positive scalar
        Trace tolerance (T <= tol is accepted; T > tol is a violation).
    k_radius : None or positive scalar
        Only for 'NO_REAL_POSITIVE_EIG': boxes lying inside the closed disk of
        this radius centered at the origin are exempt (the compact set K
        outside which eigenvalues are constrained). Default is None.
    check_input : boolean
        If True, verify if the input is valid. Default is True.

    returns
    -------
    report : dictionary containing the following keys
        'property' : string
        'status' : 'CERTIFIED', 'SAMPLED_OK' or 'VIOLATED'
        'region' : list
        'witness' : None or jet sample of a violating point
        'boxes_processed' : int
        'n_samples' : int, pointwise jets evaluated
        'min_margin' : float, infimum of the certified (or sampled) margins
        'uncertified_fraction' : float, area fraction covered by samples only
        'k_radius' : None or float
        'notes' : list of strings
    """
    if check_input is True:
        check.is_field(field)
        check.is_region(region)
        if prop not in PROPERTIES:
            raise ValueError("invalid property {}".format(prop))
        check.is_integer(max_depth, positive=False)
        check.is_scalar(tol, positive=True)
        if k_radius is not None:
            check.is_scalar(k_radius, positive=True)
            if prop != "NO_REAL_POSITIVE_EIG":
                raise ValueError("k_radius only applies to 'NO_REAL_POSITIVE_EIG'")

    total_area = utils.box_area(region)
    queue = deque([(list(region), 0)])
    boxes = 0
    samples = 0
    min_margin = math.inf
    sampled_area = 0.0
    failed_area = 0.0
    witness = None
    while queue:
        box, depth = queue.popleft()
        boxes += 1
        if k_radius is not None and utils.box_max_distance(box, (0.0, 0.0)) <= k_radius:
            continue
        try:
            enclosure = fld.interval_jet(field, box, check_input=False)
            margin = _accept(prop, enclosure, tol)
        except EnclosureError:
            enclosure = None
            margin = None
        if margin is not None:
            min_margin = min(min_margin, margin)
            continue
        sample = fld.jet(field, utils.box_center(box), check_input=False)
        samples += 1
        point_margin = _pointwise(prop, sample, tol)
        if _violates(prop, point_margin, tol):
            witness = sample
            break
        if depth < max_depth:
            queue.extend((child, depth + 1) for child in utils.split_box(box))
            continue
        min_margin = min(min_margin, point_margin)
        sampled_area += utils.box_area(box)
        if enclosure is None:
            failed_area += utils.box_area(box)

    notes = []
    if witness is not None:
        status = "VIOLATED"
        min_margin = _pointwise(prop, witness, tol)
        notes.append("violation at {}".format(witness["point"]))
    elif sampled_area > 0:
        status = "SAMPLED_OK"
        notes.append(
            "{:.3g} of the region area is covered by samples only".format(
                sampled_area / total_area
            )
        )
    else:
        status = "CERTIFIED"
    if failed_area > cts.FAILED_AREA_FRACTION * total_area:
        message = "{} enclosure failed at max depth on {:.3g} of the region area".format(
            prop, failed_area / total_area
        )
        notes.append(message)
        warnings.warn(message)
    if k_radius is not None:
        notes.append("disk of radius {} around the origin exempt".format(k_radius))

    return {
        "property": prop,
        "status": status,
        "region": list(region),
        "witness": witness,
        "boxes_processed": boxes,
        "n_samples": samples,
        "min_margin": float(min_margin) if math.isfinite(min_margin) else None,
        "uncertified_fraction": sampled_area / total_area,
        "k_radius": k_radius,
        "notes": notes,
    }


def verify_hypotheses(
    field, region, max_depth=cts.MAX_DEPTH, tol=cts.TRACE_TOL, k_radius=None, check_input=True
):
    """
    Certify DET_POSITIVE, TRACE_NONPOSITIVE and NO_REAL_POSITIVE_EIG over a
    region. See ``verify_property``.

    returns
    -------
    reports : list of dictionaries
        One report per property, in the order of ``PROPERTIES``.
    """
    if check_input is True:
        check.is_field(field)
        check.is_region(region)
    return [
        verify_property(
            field,
            region,
            prop,
            max_depth=max_depth,
            tol=tol,
            k_radius=k_radius if prop == "NO_REAL_POSITIVE_EIG" else None,
            check_input=check_input,
        )
        for prop in PROPERTIES
    ]


##### trace vanishing


def _trace_cover(field, root, keep, sample_points, tol, max_depth):
    """
    Branch-and-bound over boxes deciding whether |T| <= tol on the part of
    the root box selected by ``keep``.
    """
    queue = deque([(list(root), 0)])
    boxes = 0
    sup_abs = 0.0
    inconclusive = 0
    while queue:
        box, depth = queue.popleft()
        if keep(box) is False:
            continue
        boxes += 1
        try:
            T = fld.interval_jet(field, box, check_input=False)["trace"]
            bound = max(abs(T.lo), abs(T.hi))
        except EnclosureError:
            bound = math.inf
        if bound <= tol:
            sup_abs = max(sup_abs, bound)
            continue
        for point in sample_points(box):
            sample = fld.jet(field, point, check_input=False)
            if abs(sample["trace"]) > tol:
                return {
                    "vanishes": False,
                    "witness": sample,
                    "boxes_processed": boxes,
                    "sup_abs_trace": None,
                }
        if depth < max_depth:
            queue.extend((child, depth + 1) for child in utils.split_box(box))
        else:
            inconclusive += 1
    return {
        "vanishes": True if inconclusive == 0 else None,
        "witness": None,
        "boxes_processed": boxes,
        "sup_abs_trace": sup_abs if inconclusive == 0 else None,
    }


def trace_vanishes_near(
    field, point, radius, tol=cts.TRACE_TOL, max_depth=cts.MAX_DEPTH, check_input=True
):
    """
    Decide whether |T| <= tol on the closed disk of given radius around a
    point, from interval enclosures over a box cover of the disk.

    parameters
    ----------
    field : dictionary
        Field definition.
    point : sequence of 2 floats
        Disk center.
    radius : positive scalar
        Disk radius.
    tol : positive scalar
        Trace tolerance. Default is ``constants.TRACE_TOL``.
    max_depth : int
        Maximum number of box subdivisions.
    check_input : boolean
        If True, verify if the input is valid. Default is True.

    returns
    -------
    result : dictionary containing the following keys
        'vanishes' : True (certified), False (witness found) or None
            (inconclusive at max_depth)
        'witness' : None or jet sample with |T| > tol
        'boxes_processed' : int
        'sup_abs_trace' : None or certified upper bound of |T| on the disk
        'point', 'radius', 'tol' : the inputs
    """
    if check_input is True:
        check.is_field(field)
        check.is_point(point)
        check.is_scalar(radius, positive=True)
        check.is_scalar(tol, positive=True)
        check.is_integer(max_depth, positive=False)
    center = (float(point[0]), float(point[1]))
    root = [center[0] - radius, center[0] + radius, center[1] - radius, center[1] + radius]

    def keep(box):
        return utils.box_distance(box, center) <= radius

    def sample_points(box):
        points = [utils.box_closest_point(box, center)]
        middle = utils.box_center(box)
        if math.hypot(middle[0] - center[0], middle[1] - center[1]) <= radius:
            points.append(middle)
        return points

    result = _trace_cover(field, root, keep, sample_points, tol, max_depth)
    result.update({"point": center, "radius": float(radius), "tol": float(tol)})
    return result


def trace_vanishes_on_region(
    field, region, tol=cts.TRACE_TOL, max_depth=cts.MAX_DEPTH, check_input=True
):
    """
    Decide whether |T| <= tol on a whole rectangle. Same outputs as
    ``trace_vanishes_near`` with the key 'region' instead of 'point' and
    'radius'.
    """
    if check_input is True:
        check.is_field(field)
        check.is_region(region)
        check.is_scalar(tol, positive=True)
        check.is_integer(max_depth, positive=False)
    result = _trace_cover(
        field,
        region,
        lambda box: True,
        lambda box: [utils.box_center(box)],
        tol,
        max_depth,
    )
    result.update({"region": list(region), "tol": float(tol)})
    return result


##### closure of the negative trace set


def _disk_minimum(field, center, radius, n_radii=8, n_angles=32):
    """
    Smallest trace found in a disk: polar grid scan followed by a bounded
    local minimization from the best grid point.
    """
    rho = radius * np.arange(1, n_radii + 1) / n_radii
    theta = 2 * np.pi * np.arange(n_angles) / n_angles
    rho, theta = np.meshgrid(rho, theta, indexing="ij")
    x = center[0] + rho * np.cos(theta)
    y = center[1] + rho * np.sin(theta)
    jets = fld.jet_arrays(field, np.append(x.ravel(), center[0]), np.append(y.ravel(), center[1]), check_input=False)
    trace = np.where(np.isfinite(jets["trace"]), jets["trace"], np.inf)
    k = int(np.argmin(trace))
    best = (float(jets["x"][k]), float(jets["y"][k]))
    if trace[k] < np.inf:
        start = np.array(
            [
                math.hypot(best[0] - center[0], best[1] - center[1]),
                math.atan2(best[1] - center[1], best[0] - center[0]),
            ]
        )

        def objective(z):
            px = center[0] + z[0] * math.cos(z[1])
            py = center[1] + z[0] * math.sin(z[1])
            value = fld.jet(field, (px, py), check_input=False)["trace"]
            return value

        try:
            result = minimize(
                objective,
                start,
                method="L-BFGS-B",
                bounds=[(0.0, radius), (None, None)],
            )
            if result.fun < trace[k]:
                z = result.x
                best = (
                    center[0] + z[0] * math.cos(z[1]),
                    center[1] + z[0] * math.sin(z[1]),
                )
        except fld.NonFiniteError:
            pass
    return fld.jet(field, best, check_input=False)


def in_closure_T_minus(
    field,
    point,
    r_min=cts.R_MIN,
    delta=cts.DELTA,
    tol=cts.TRACE_TOL,
    max_depth=cts.MAX_DEPTH,
    check_input=True,
):
    """
    Decide whether a point belongs to the closure of T- = {T < 0}.

    The disks of radius 1, 1/2, 1/4, ... down to r_min around the point are
    searched for a point with T < -delta. The answer is True when every scale
    has such a witness, False when the trace certifiably vanishes on the disk
    of radius r_min and None (indeterminate) otherwise.

    parameters
    ----------
    field : dictionary
        Field definition.
    point : sequence of 2 floats
        Center of the disks (usually a critical point).
    r_min : positive scalar
        Smallest disk radius.
    delta : positive scalar
        Strictness margin.
    tol, max_depth : see ``trace_vanishes_near``.
    check_input : boolean
        If True, verify if the input is valid. Default is True.

    returns
    -------
    result : dictionary containing the following keys
        'in_closure' : True, False or None
        'witness' : innermost jet sample with T < -delta (or None)
        'scales' : list of dictionaries with keys 'radius', 'min_trace', 'point'
        'trace_near' : result of ``trace_vanishes_near`` at r_min, or None
    """
    if check_input is True:
        check.is_field(field)
        check.is_point(point)
        check.is_scalar(r_min, positive=True)
        check.is_scalar(delta, positive=True)
        if r_min > 1:
            raise ValueError("r_min must not exceed 1")
    center = (float(point[0]), float(point[1]))
    scales = []
    witness = None
    radius = 1.0
    while radius >= r_min:
        sample = _disk_minimum(field, center, radius)
        scales.append(
            {"radius": radius, "min_trace": sample["trace"], "point": sample["point"]}
        )
        if sample["trace"] >= -delta:
            break
        witness = sample
        radius *= 0.5
    else:
        return {"in_closure": True, "witness": witness, "scales": scales, "trace_near": None}

    near = trace_vanishes_near(
        field, center, r_min, tol=tol, max_depth=max_depth, check_input=False
    )
    verdict = False if near["vanishes"] is True else None
    if verdict is None:
        warnings.warn(
            "closure of T- undecided at {}: no witness at radius {} and the trace "
            "does not certifiably vanish at radius {}".format(center, radius, r_min)
        )
    return {"in_closure": verdict, "witness": witness, "scales": scales, "trace_near": near}


##### critical points


def _newton(field, seed, tol, max_iter):
    """
    Damped Newton iteration for F = 0 with backtracking on |F|.
    """
    z = np.array(seed, dtype=float)
    sample = fld.jet(field, z, check_input=False)
    norm = math.hypot(*sample["value"])
    for _ in range(max_iter):
        if norm < tol:
            return z, norm
        step = np.linalg.solve(np.array(sample["jac"]), -np.array(sample["value"]))
        damping = 1.0
        while damping > 1e-6:
            trial = z + damping * step
            try:
                trial_sample = fld.jet(field, trial, check_input=False)
            except fld.NonFiniteError:
                damping *= 0.5
                continue
            trial_norm = math.hypot(*trial_sample["value"])
            if trial_norm < norm:
                break
            damping *= 0.5
        else:
            return z, norm
        z, sample, norm = trial, trial_sample, trial_norm
    return z, norm


def find_critical_points(
    field,
    region,
    shape=(9, 9),
    tol=cts.NEWTON_TOL,
    dedup_tol=cts.DEDUP_TOL,
    max_iter=60,
    check_input=True,
):
    """
    Locate the critical points of a field inside a region by Newton's method
    seeded from a regular grid.

    parameters
    ----------
    field : dictionary
        Field definition.
    region : list
        Rectangle [xmin, xmax, ymin, ymax].
    shape : tuple
        Number of seeds along x and y.
    tol : positive scalar
        Convergence threshold on |F|.
    dedup_tol : positive scalar
        Points closer than this are merged.
    max_iter : int
        Maximum number of Newton iterations per seed.
    check_input : boolean
        If True, verify if the input is valid. Default is True.

    returns
    -------
    result : dictionary containing the following keys
        'points' : list of (x, y) tuples sorted lexicographically
        'residuals' : list of |F| at the points
        'n_seeds' : int
        'n_converged' : int, seeds converging inside the region
        'n_dropped' : int, seeds that diverged, stalled or left the region
    """
    if check_input is True:
        check.is_field(field)
        check.is_region(region)
        check.is_shape(shape)
        check.is_scalar(tol, positive=True)
        check.is_scalar(dedup_tol, positive=True)
    xs = np.linspace(region[0], region[1], shape[0])
    ys = np.linspace(region[2], region[3], shape[1])
    found = []
    dropped = 0
    for x in xs:
        for y in ys:
            try:
                z, norm = _newton(field, (x, y), tol, max_iter)
            except (np.linalg.LinAlgError, fld.NonFiniteError):
                dropped += 1
                continue
            inside = (region[0] <= z[0] <= region[1]) and (region[2] <= z[1] <= region[3])
            if norm < tol and inside:
                found.append((norm, (float(z[0]), float(z[1]))))
            else:
                dropped += 1
    points = []
    residuals = []
    for norm, z in sorted(found):
        if all(math.hypot(z[0] - p[0], z[1] - p[1]) > dedup_tol for p in points):
            points.append(z)
            residuals.append(norm)
    order = sorted(range(len(points)), key=lambda i: points[i])
    return {
        "points": [points[i] for i in order],
        "residuals": [residuals[i] for i in order],
        "n_seeds": int(shape[0] * shape[1]),
        "n_converged": len(found),
        "n_dropped": dropped,
    }


##### injectivity


def injectivity_falsify(
    field,
    region,
    n_pairs,
    seed=0,
    n_refine=20,
    collision_tol=cts.COLLISION_TOL,
    separation_tol=cts.SEPARATION_TOL,
    check_input=True,
):
    """
    Search for two distinct points with the same image under F.

    Random pairs (p, q) are drawn uniformly in the region; the pairs with the
    smallest ratio |F(p) - F(q)| / |p - q| are refined by solving
    F(q) = F(p) for q with p fixed (least squares, exact Jacobian). A
    refined pair is a collision when |F(p) - F(q)| < collision_tol and
    |p - q| > separation_tol.

    parameters
    ----------
    field : dictionary
        Field definition.
    region : list
        Sampling rectangle [xmin, xmax, ymin, ymax].
    n_pairs : int
        Number of random pairs.
    seed : int
        Seed of the random generator.
    n_refine : int
        Number of candidate pairs refined.
    collision_tol, separation_tol : positive scalars
        Acceptance thresholds.
    check_input : boolean
        If True, verify if the input is valid. Default is True.

    returns
    -------
    result : dictionary containing the following keys
        'collision' : None or dictionary with keys 'p', 'q', 'residual', 'separation'
        'n_pairs' : int
        'n_refined' : int
        'seed' : int
    """
    if check_input is True:
        check.is_field(field)
        check.is_region(region)
        check.is_integer(n_pairs, positive=True)
        check.is_integer(seed, positive=False)
        check.is_integer(n_refine, positive=True)
    rng = np.random.default_rng(seed)
    low = np.array([region[0], region[2]])
    high = np.array([region[1], region[3]])
    p = rng.uniform(low, high, size=(n_pairs, 2))
    q = rng.uniform(low, high, size=(n_pairs, 2))
    velocity = fld.velocity_function(field, check_input=False)
    Fp = np.column_stack(velocity(p[:, 0], p[:, 1]))
    Fq = np.column_stack(velocity(q[:, 0], q[:, 1]))
    distance = np.hypot(*(Fp - Fq).T)
    separation = np.hypot(*(p - q).T)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(separation > separation_tol, distance / separation, np.inf)
    ratio = np.where(np.isfinite(ratio), ratio, np.inf)
    candidates = np.argsort(ratio, kind="stable")[: min(n_refine, n_pairs)]

    refined = 0
    for k in candidates:
        if ratio[k] == np.inf:
            continue
        refined += 1
        target = Fp[k]

        def residual(z):
            return np.array(fld.eval_velocity(field, z, check_input=False)) - target

        def jacobian(z):
            return np.array(fld.jet(field, z, check_input=False)["jac"])

        try:
            solution = least_squares(
                residual, q[k], jac=jacobian, xtol=1e-15, ftol=1e-15, gtol=1e-15
            )
        except (fld.NonFiniteError, np.linalg.LinAlgError, ValueError):
            continue
        z = solution.x
        gap = float(np.hypot(*residual(z)))
        apart = float(np.hypot(*(z - p[k])))
        if gap < collision_tol and apart > separation_tol:
            return {
                "collision": {
                    "p": (float(p[k, 0]), float(p[k, 1])),
                    "q": (float(z[0]), float(z[1])),
                    "residual": gap,
                    "separation": apart,
                },
                "n_pairs": n_pairs,
                "n_refined": refined,
                "seed": seed,
            }
    return {"collision": None, "n_pairs": n_pairs, "n_refined": refined, "seed": seed}


##### behaviour at the region boundary


def boundary_growth(field, region, n_per_side=256, check_input=True):
    """
    Smallest speed |F| sampled along the boundary of a region.

    returns
    -------
    result : dictionary with keys 'min_norm' and 'point'
    """
    if check_input is True:
        check.is_field(field)
        check.is_region(region)
        check.is_integer(n_per_side, positive=True)
    ring = data_structures.rectangle_polygon(region, n_per_side, check_input=False)
    P, Q = fld.velocity_function(field, check_input=False)(ring[:, 0], ring[:, 1])
    norm = np.hypot(P, Q)
    norm = np.where(np.isfinite(norm), norm, np.inf)
    k = int(np.argmin(norm))
    return {
        "min_norm": float(norm[k]),
        "point": (float(ring[k, 0]), float(ring[k, 1])),
    }
