"""
Hamiltonian reconstruction where the trace vanishes identically: then
Q dx - P dy is closed, so H with P = -H_y and Q = H_x is obtained by line
integration along axis-parallel L-paths.
"""

import warnings
import numpy as np
from scipy.integrate import quad_vec
from scipy.interpolate import RectBivariateSpline, RegularGridInterpolator
from . import check, data_structures, flow, verify, field as fld
from . import constants as cts


class PathDependenceError(ValueError):
    """
    Raised when the trace is not certified to vanish on the region, so the
    line integral defining H may depend on the path.
    """


def hamiltonian_at(field, base, x, y, path="xy", quad_tol=cts.QUAD_TOL, check_input=True):
    """
    H(x, y) = integral of (Q dx - P dy) from base to (x, y) along an
    axis-parallel L-path, by adaptive vector quadrature. No certification is
    done here; see ``reconstruct_hamiltonian``.

    parameters
    ----------
    field : dictionary
        Field definition.
    base : sequence of 2 floats
        Point where H = 0.
    x, y : numpy arrays
        Coordinates of the evaluation points (same shape).
    path : string
        'xy' moves along x first, then along y. 'yx' moves along y first.
    quad_tol : positive scalar
        Absolute tolerance of the quadrature.
    check_input : boolean
        If True, verify if the input is valid. Default is True.

    returns
    -------
    H : numpy array with the shape of x
    """
    if check_input is True:
        check.is_field(field)
        check.is_point(base)
        if path not in ["xy", "yx"]:
            raise ValueError("invalid path {}".format(path))
        check.is_scalar(quad_tol, positive=True)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    shape = np.broadcast(x, y).shape
    x, y = np.broadcast_to(x, shape).ravel(), np.broadcast_to(y, shape).ravel()
    x0, y0 = float(base[0]), float(base[1])
    velocity = fld.velocity_function(field, check_input=False)
    dx, dy = x - x0, y - y0

    if path == "xy":
        # (x0, y0) -> (x, y0) -> (x, y)
        def integrand(tau):
            Q1 = velocity(x0 + tau * dx, np.full_like(x, y0))[1]
            P2 = velocity(x, y0 + tau * dy)[0]
            return Q1 * dx - P2 * dy

    else:
        # (x0, y0) -> (x0, y) -> (x, y)
        def integrand(tau):
            P1 = velocity(np.full_like(x, x0), y0 + tau * dy)[0]
            Q2 = velocity(x0 + tau * dx, y)[1]
            return Q2 * dx - P1 * dy

    H, _ = quad_vec(integrand, 0.0, 1.0, epsabs=quad_tol, epsrel=0.0, norm="max")
    return np.reshape(H, shape)


def reconstruct_hamiltonian(
    field,
    base,
    region,
    shape=(257, 257),
    path="xy",
    tol=cts.TRACE_TOL,
    max_depth=cts.MAX_DEPTH,
    check_input=True,
):
    """
    Reconstruct the Hamiltonian of a field on a regular grid covering a
    region where the trace is certified to vanish.

    parameters
    ----------
    field : dictionary
        Field definition.
    base : sequence of 2 floats
        Point of the region where H = 0.
    region : list
        Rectangle [xmin, xmax, ymin, ymax].
    shape : tuple
        Number of grid nodes along x and y.
    path : string
        L-path orientation, 'xy' or 'yx'.
    tol, max_depth : see ``verify.trace_vanishes_on_region``.
    check_input : boolean
        If True, verify if the input is valid. Default is True.

    returns
    -------
    H : dictionary
        Scalar grid with the keys 'x', 'y', 'values', 'region' and 'shape';
        values[i, j] = H(x[i], y[j]).

    Raises ``PathDependenceError`` when the trace does not certifiably vanish
    on the region.
    """
    if check_input is True:
        check.is_field(field)
        check.is_point(base)
        check.is_region(region)
        check.is_shape(shape)
        if not (region[0] <= base[0] <= region[1] and region[2] <= base[1] <= region[3]):
            raise ValueError("base must lie in the region")
    certificate = verify.trace_vanishes_on_region(
        field, region, tol=tol, max_depth=max_depth, check_input=False
    )
    if certificate["vanishes"] is not True:
        where = ""
        if certificate["witness"] is not None:
            where = " (T = {} at {})".format(
                certificate["witness"]["trace"], certificate["witness"]["point"]
            )
        raise PathDependenceError(
            "the trace does not certifiably vanish on {}{}".format(region, where)
        )
    grid = data_structures.region_grid(region, shape, check_input=False)
    X, Y = np.meshgrid(grid["x"], grid["y"], indexing="ij")
    values = hamiltonian_at(field, base, X, Y, path=path, check_input=False)
    return data_structures.scalar_grid(grid, values)


def hamiltonian_residual(field, H, samples=1000, seed=0, check_input=True):
    """
    Maximum of |P + H_y| + |Q - H_x| over random interior points, with the
    gradient of H from central differences (step equal to the grid spacing)
    of its bicubic spline interpolant.

    parameters
    ----------
    field : dictionary
        Field definition.
    H : dictionary
        Scalar grid (see ``reconstruct_hamiltonian``).
    samples : int
        Number of random points.
    seed : int
        Seed of the random generator.
    check_input : boolean
        If True, verify if the input is valid. Default is True.

    returns
    -------
    residual : float
    """
    if check_input is True:
        check.is_field(field)
        check.is_scalar_grid(H)
        check.is_integer(samples, positive=True)
        check.is_integer(seed, positive=False)
        if min(H["shape"]) < 6:
            raise ValueError("H must have at least 6 nodes per direction")
    hx, hy = data_structures.region_grid_spacing(H["region"], H["shape"], check_input=False)
    spline = RectBivariateSpline(H["x"], H["y"], H["values"], kx=3, ky=3, s=0)
    rng = np.random.default_rng(seed)
    xmin, xmax, ymin, ymax = H["region"]
    x = rng.uniform(xmin + 2 * hx, xmax - 2 * hx, samples)
    y = rng.uniform(ymin + 2 * hy, ymax - 2 * hy, samples)
    H_x = (spline(x + hx, y, grid=False) - spline(x - hx, y, grid=False)) / (2 * hx)
    H_y = (spline(x, y + hy, grid=False) - spline(x, y - hy, grid=False)) / (2 * hy)
    P, Q = fld.velocity_function(field, check_input=False)(x, y)
    return float(np.max(np.abs(P + H_y) + np.abs(Q - H_x)))


def hessian_extremum(field, point, check_input=True):
    """
    Hessian of the Hamiltonian at a critical point, assembled from the jet
    as [[Q_x, Q_y], [-P_x, -P_y]]. Its determinant is D. A positive
    determinant gives a definite Hessian, hence an extremum of H and a
    center: MIN when Q_x > 0 and MAX when Q_x < 0.

    parameters
    ----------
    field : dictionary
        Field definition.
    point : sequence of 2 floats
        Critical point.
    check_input : boolean
        If True, verify if the input is valid. Default is True.

    returns
    -------
    result : dictionary containing the following keys
        'matrix' : tuple of tuples
        'det' : float
        'kind' : 'MIN', 'MAX' or 'INDEFINITE'
        'notes' : list of strings
    """
    if check_input is True:
        check.is_field(field)
        check.is_point(point)
    sample = fld.jet(field, point, check_input=False)
    (Px, Py), (Qx, Qy) = sample["jac"]
    matrix = ((Qx, Qy), (-Px, -Py))
    det = matrix[0][0] * matrix[1][1] - matrix[0][1] * matrix[1][0]
    notes = []
    if det <= 0:
        kind = "INDEFINITE"
        notes.append("non-positive Hessian determinant {}: hypotheses violated".format(det))
        warnings.warn(notes[-1])
    else:
        leading = Qx if Qx != 0 else -Py
        kind = "MIN" if leading > 0 else "MAX"
    speed = float(np.hypot(*sample["value"]))
    if speed > cts.NEWTON_TOL:
        notes.append("|F| = {:.3g} at the point: not a critical point".format(speed))
    return {"matrix": matrix, "det": float(det), "kind": kind, "notes": notes}


def conservation_check(field, H, x0, t_end, config=None, n_samples=2000, check_input=True):
    """
    Largest drift |H(phi(t, x0)) - H(x0)| along an orbit, with H interpolated
    bilinearly on its grid. The orbit is checked up to its first exit from
    the grid region.

    parameters
    ----------
    field : dictionary
        Field definition.
    H : dictionary
        Scalar grid.
    x0 : sequence of 2 floats
        Initial point (inside the grid region).
    t_end : positive scalar
        Final time.
    config : dictionary or None
        Integrator settings.
    n_samples : int
        Number of orbit samples (dense output).
    check_input : boolean
        If True, verify if the input is valid. Default is True.

    returns
    -------
    result : dictionary containing the following keys
        'drift' : float
        'partial' : boolean, True if the orbit left the region
        't_checked' : float, end of the checked time span
        'status' : integration status
    """
    if check_input is True:
        check.is_field(field)
        check.is_scalar_grid(H)
        check.is_point(x0)
        check.is_scalar(t_end, positive=True)
        check.is_integer(n_samples, positive=True)
    trajectory = flow.integrate(field, x0, t_end, config, check_input=check_input)
    times, states = flow.sample_trajectory(trajectory, n_samples, check_input=False)
    xmin, xmax, ymin, ymax = H["region"]
    inside = (
        (states[:, 0] >= xmin)
        & (states[:, 0] <= xmax)
        & (states[:, 1] >= ymin)
        & (states[:, 1] <= ymax)
    )
    partial = bool(np.any(inside == False))
    stop = int(np.argmin(inside)) if partial else inside.size
    if stop == 0:
        raise ValueError("x0 must lie in the region of H")
    interpolant = RegularGridInterpolator((H["x"], H["y"]), H["values"], method="linear")
    values = interpolant(states[:stop])
    if partial:
        warnings.warn("orbit left the region of H at t = {}".format(times[stop]))
    return {
        "drift": float(np.max(np.abs(values - values[0]))),
        "partial": partial,
        "t_checked": float(times[stop - 1]),
        "status": trajectory["status"],
    }
