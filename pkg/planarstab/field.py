"""
Planar C1 vector fields F = (P, Q): construction (built-in systems and the
expression language), evaluation, exact first-order jets by forward-mode
dual numbers and interval enclosures of the jets over boxes.

A field is a dictionary with the keys

    'name' : string
    'source' : 'linear_rotation', 'cubic_damped', 'bump_annulus' or 'expression'
    'p_expr', 'q_expr' : syntax trees (see ``expressions``)
    'parameters' : dictionary name -> float
    'analytic' : boolean (declared, never inferred)
"""

import math
import functools
import numpy as np
from . import check, dual, expressions
from .dual import Dual
from .intervals import Interval, widen


class NonFiniteError(FloatingPointError):
    """
    Raised when a field value or derivative overflows or is not a number.
    """


#: Built-in systems
BUILTINS = ("linear_rotation", "cubic_damped", "bump_annulus")

#: Default shape of the bump alpha(r) = scale * exp(-width / (r - r0)), r > r0
BUMP_SHAPE = {"r0": 1.0, "width": 1.0, "scale": 1.0}

_X = ("var", "x")
_Y = ("var", "y")
_R2 = ("add", ("pow", _X, 2), ("pow", _Y, 2))
_ALPHA = ("call", "bump", _R2)

_BUILTIN_TREES = {
    # x' = -y, y' = x
    "linear_rotation": (("neg", _Y), _X),
    # x' = y, y' = -x - y^3
    "cubic_damped": (_Y, ("sub", ("neg", _X), ("pow", _Y, 3))),
    # x' = y - x alpha(r), y' = -x - y alpha(r)
    "bump_annulus": (
        ("sub", _Y, ("mul", _X, _ALPHA)),
        ("sub", ("neg", _X), ("mul", _Y, _ALPHA)),
    ),
}

_ANALYTIC = {"linear_rotation": True, "cubic_damped": True, "bump_annulus": False}


def builtin(name, check_input=True, **shape):
    """
    Create one of the built-in fields.

    parameters
    ----------
    name : string
        'linear_rotation', 'cubic_damped' or 'bump_annulus'.
    check_input : boolean
        If True, verify if the input is valid. Default is True.
    shape : floats
        Keyword arguments 'r0', 'width' and 'scale' overriding the default
        bump shape (only for 'bump_annulus').

    returns
    -------
    field : dictionary
        Field definition.
    """
    if check_input is True:
        if name not in BUILTINS:
            raise ValueError("invalid built-in field {}".format(name))
        if shape and name != "bump_annulus":
            raise ValueError("only 'bump_annulus' accepts shape parameters")
        for key, value in shape.items():
            if key not in BUMP_SHAPE:
                raise ValueError("invalid bump shape parameter {}".format(key))
            check.is_scalar(value, positive=True)
    parameters = {}
    if name == "bump_annulus":
        parameters = dict(BUMP_SHAPE)
        parameters.update({k: float(v) for k, v in shape.items()})
    p_expr, q_expr = _BUILTIN_TREES[name]
    return {
        "name": name,
        "source": name,
        "p_expr": p_expr,
        "q_expr": q_expr,
        "parameters": parameters,
        "analytic": _ANALYTIC[name],
    }


def parse_field(src, params=None, name="expression", analytic=False):
    """
    Create a field from the text ``P = <expr> ; Q = <expr>``.

    parameters
    ----------
    src : string
        Field definition in the expression language (see ``expressions``).
    params : dictionary or None
        Parameter table name -> value used by the expressions.
    name : string
        Name of the field. Default is 'expression'.
    analytic : boolean
        User assertion that P and Q are analytic. Default is False.

    returns
    -------
    field : dictionary
        Field definition.
    """
    params = {} if params is None else params
    if type(params) != dict:
        raise ValueError("params must be a dictionary")
    for key, value in params.items():
        if key in ("x", "y", "P", "Q") or key in dual.FUNCTIONS:
            raise ValueError("invalid parameter name {}".format(key))
        check.is_scalar(value, positive=False)
    if isinstance(analytic, bool) is False:
        raise ValueError("analytic must be True or False")
    p_expr, q_expr = expressions.parse(src, params)
    return {
        "name": name,
        "source": "expression",
        "p_expr": p_expr,
        "q_expr": q_expr,
        "parameters": {k: float(v) for k, v in params.items()},
        "analytic": analytic,
    }


def to_text(field):
    """
    Render a field in the expression language (the bump of 'bump_annulus'
    appears as the reserved function name 'bump').
    """
    return "P = {} ; Q = {}".format(
        expressions.to_text(field["p_expr"]), expressions.to_text(field["q_expr"])
    )


def translate(field, shift):
    """
    Pre-compose a field with the translation (x, y) -> (x - a, y - b), which
    moves a critical point at the origin to (a, b). Built-in fields become
    expression fields carrying the same parameters and analyticity flag.
    """
    check.is_point(shift)
    a, b = float(shift[0]), float(shift[1])
    mapping = {
        "x": ("sub", _X, ("const", a)),
        "y": ("sub", _Y, ("const", b)),
    }
    translated = dict(field)
    translated["p_expr"] = _substitute(field["p_expr"], mapping)
    translated["q_expr"] = _substitute(field["q_expr"], mapping)
    translated["source"] = "expression"
    translated["name"] = "{}+({}, {})".format(field["name"], a, b)
    return translated


def time_reversed(field):
    """
    The field -F, whose orbits are those of F run backwards. Repelling
    cycles of F are attracting for -F.
    """
    check.is_field(field)
    reversed_field = dict(field)
    reversed_field["p_expr"] = ("neg", field["p_expr"])
    reversed_field["q_expr"] = ("neg", field["q_expr"])
    reversed_field["source"] = "expression"
    reversed_field["name"] = "-({})".format(field["name"])
    return reversed_field


def _substitute(node, mapping):
    if node[0] == "var":
        return mapping[node[1]]
    if node[0] in ("const", "param"):
        return node
    if node[0] == "call":
        return ("call", node[1], _substitute(node[2], mapping))
    if node[0] == "pow":
        return ("pow", _substitute(node[1], mapping), node[2])
    return (node[0],) + tuple(_substitute(child, mapping) for child in node[1:])


##### bump function


def alpha_bump(r, shape=None):
    """
    Bump alpha(r) = scale * exp(-width / (r - r0)) for r > r0 and 0 otherwise,
    together with its derivative alpha'(r) = alpha(r) * width / (r - r0)**2.
    Both vanish identically for r <= r0 and are positive for r > r0.

    parameters
    ----------
    r : scalar or numpy array
        Non-negative radii.
    shape : dictionary or None
        Keys 'r0', 'width', 'scale'. Default is ``BUMP_SHAPE``.

    returns
    -------
    alpha, dalpha : scalars or numpy arrays
        Values and derivatives at r.
    """
    shape = BUMP_SHAPE if shape is None else shape
    r_arr = np.asarray(r, dtype=float)
    if np.any(r_arr < 0) or np.any(np.isnan(r_arr)):
        raise ValueError("r must be non-negative")
    u = r_arr - shape["r0"]
    positive = u > 0
    safe_u = np.where(positive, u, 1.0)
    with np.errstate(over="ignore", under="ignore", divide="ignore"):
        exponent = -shape["width"] / safe_u
        alpha = np.where(positive, shape["scale"] * np.exp(exponent), 0.0)
        dalpha = np.where(
            positive,
            shape["scale"]
            * shape["width"]
            * np.exp(exponent - 2.0 * np.log(safe_u)),
            0.0,
        )
    if np.ndim(r) == 0:
        return float(alpha), float(dalpha)
    return alpha, dalpha


def _bump_bounds(r_lo, r_hi, shape):
    """
    Enclosures of alpha and alpha' for r in [r_lo, r_hi]. alpha is increasing;
    alpha' increases up to r0 + width/2 and decreases afterwards.
    """
    a_lo, da_lo = alpha_bump(r_lo, shape)
    a_hi, da_hi = alpha_bump(r_hi, shape)
    if r_hi <= shape["r0"]:
        return Interval(0.0), Interval(0.0)
    da_min, da_max = min(da_lo, da_hi), max(da_lo, da_hi)
    r_peak = shape["r0"] + 0.5 * shape["width"]
    if r_lo <= r_peak <= r_hi:
        da_max = alpha_bump(r_peak, shape)[1]
    # exp underflows long before alpha reaches zero
    tiny = np.finfo(float).smallest_subnormal
    pad = 1.0 + 8.0 * np.finfo(float).eps
    return (
        Interval(a_lo / pad, max(a_hi * pad, tiny)),
        Interval(da_min / pad, max(da_max * pad, tiny)),
    )


def _root_bounds(s):
    r_lo, r_hi = math.sqrt(max(s.lo, 0.0)), math.sqrt(s.hi)
    r_lo = float(np.nextafter(r_lo, -np.inf)) if r_lo > 0 else 0.0
    return r_lo, float(np.nextafter(r_hi, np.inf))


def _bump_of_square(s, shape):
    """
    alpha evaluated at r = sqrt(s), s = x^2 + y^2. Dual arguments receive
    d alpha / d s = alpha'(r) / (2 r), which vanishes for r <= r0 so the
    origin needs no special handling.
    """
    if isinstance(s, Dual):
        if isinstance(s.val, Interval):
            r_lo, r_hi = _root_bounds(s.val)
            alpha, dalpha = _bump_bounds(r_lo, r_hi, shape)
            if dalpha.hi == 0.0:
                return s.chain(alpha, Interval(0.0))
            r_floor = max(r_lo, shape["r0"])
            return s.chain(alpha, dalpha * Interval(0.5 / r_hi, 0.5 / r_floor))
        r = np.sqrt(s.val)
        alpha, dalpha = alpha_bump(r, shape)
        with np.errstate(divide="ignore", invalid="ignore"):
            ds = np.where(dalpha > 0, dalpha / (2.0 * np.where(r > 0, r, 1.0)), 0.0)
        if np.ndim(ds) == 0:
            ds = float(ds)
        return s.chain(alpha, ds)
    if isinstance(s, Interval):
        r_lo, r_hi = _root_bounds(s)
        return _bump_bounds(r_lo, r_hi, shape)[0]
    return alpha_bump(np.sqrt(s), shape)[0]


##### evaluation


def _calls_bump(node):
    if node[0] == "call":
        return node[1] == "bump" or _calls_bump(node[2])
    if node[0] in ("const", "var", "param"):
        return False
    if node[0] == "pow":
        return _calls_bump(node[1])
    return any(_calls_bump(child) for child in node[1:])


@functools.lru_cache(maxsize=64)
def _compile(p_expr, q_expr, parameters):
    parameters = dict(parameters)
    functions = dict(dual.FUNCTIONS)
    if _calls_bump(p_expr) or _calls_bump(q_expr):
        shape = {k: parameters[k] for k in BUMP_SHAPE}
        functions["bump"] = functools.partial(_bump_of_square, shape=shape)
    p = expressions.compile_tree(p_expr, parameters, functions)
    q = expressions.compile_tree(q_expr, parameters, functions)
    return p, q


def compile_field(field):
    """
    Closures P(x, y) and Q(x, y) accepting floats, numpy arrays, dual
    numbers or intervals. Compiled closures are cached per field content.
    """
    return _compile(
        field["p_expr"], field["q_expr"], tuple(sorted(field["parameters"].items()))
    )


def velocity_function(field, check_input=True):
    """
    Vectorized closure f(x, y) -> (P, Q) returning numpy arrays broadcast to
    the shape of the inputs.
    """
    if check_input is True:
        check.is_field(field)
    p, q = compile_field(field)

    def f(x, y):
        with np.errstate(all="ignore"):
            P = p(x, y)
            Q = q(x, y)
        shape = np.broadcast(x, y).shape
        return (
            np.broadcast_to(np.asarray(P, dtype=float), shape),
            np.broadcast_to(np.asarray(Q, dtype=float), shape),
        )

    return f


def eval_velocity(field, point, check_input=True):
    """
    Evaluate F(x, y) = (P(x, y), Q(x, y)).

    parameters
    ----------
    field : dictionary
        Field definition.
    point : sequence of 2 floats
        Finite coordinates (x, y).
    check_input : boolean
        If True, verify if the input is valid. Default is True.

    returns
    -------
    P, Q : floats
        Velocity components.
    """
    if check_input is True:
        check.is_field(field)
        check.is_point(point)
    x, y = np.float64(point[0]), np.float64(point[1])
    try:
        P, Q = velocity_function(field, check_input=False)(x, y)
    except (ZeroDivisionError, OverflowError) as error:
        raise NonFiniteError("velocity undefined at {}: {}".format(tuple(point), error))
    P, Q = float(P), float(Q)
    if math.isfinite(P) is False or math.isfinite(Q) is False:
        raise NonFiniteError(
            "non-finite velocity ({}, {}) at {}".format(P, Q, tuple(point))
        )
    return P, Q


def _as_dual(value, like):
    if isinstance(value, Dual):
        return value
    zero = np.zeros_like(like, dtype=float) if isinstance(like, np.ndarray) else 0.0
    return Dual(value + zero, zero, zero)


def eigen_real_parts(trace, det):
    """
    Real parts of the eigenvalues of a 2x2 matrix with the given trace and
    determinant, in ascending order. Real roots are computed with the
    cancellation-free form q = (T + sign(T) sqrt(T^2 - 4D)) / 2, D / q.

    parameters
    ----------
    trace, det : scalars or numpy arrays
        Trace T and determinant D.

    returns
    -------
    re1, re2 : scalars or numpy arrays
        Real parts with re1 <= re2. When T^2 < 4D both equal T/2.
    """
    T = np.asarray(trace, dtype=float)
    D = np.asarray(det, dtype=float)
    disc = T * T - 4.0 * D
    real = disc >= 0
    with np.errstate(divide="ignore", invalid="ignore"):
        root = np.sqrt(np.where(real, disc, 0.0))
        q = 0.5 * (T + np.where(T >= 0, root, -root))
        other = np.where(q != 0, D / np.where(q != 0, q, 1.0), 0.0)
    re1 = np.where(real, np.minimum(q, other), 0.5 * T)
    re2 = np.where(real, np.maximum(q, other), 0.5 * T)
    if np.ndim(trace) == 0 and np.ndim(det) == 0:
        return float(re1), float(re2)
    return re1, re2


def jet_arrays(field, x, y, check_input=True):
    """
    Vectorized first-order jets at the points (x[i], y[i]).

    returns
    -------
    jets : dictionary
        Keys 'x', 'y', 'P', 'Q', 'Px', 'Py', 'Qx', 'Qy', 'trace', 'det',
        're1', 're2', each a numpy array with the shape of x.
    """
    if check_input is True:
        check.is_field(field)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    x, y = np.broadcast_arrays(x, y)
    p, q = compile_field(field)
    xd, yd = Dual.variables(x.copy(), y.copy())
    try:
        with np.errstate(all="ignore"):
            P = _as_dual(p(xd, yd), x)
            Q = _as_dual(q(xd, yd), x)
    except (ZeroDivisionError, OverflowError) as error:
        raise NonFiniteError("jets undefined: {}".format(error))
    Px, Py = _broadcast(P.dx, x), _broadcast(P.dy, x)
    Qx, Qy = _broadcast(Q.dx, x), _broadcast(Q.dy, x)
    trace = Px + Qy
    det = Px * Qy - Py * Qx
    re1, re2 = eigen_real_parts(trace, det)
    return {
        "x": x,
        "y": y,
        "P": _broadcast(P.val, x),
        "Q": _broadcast(Q.val, x),
        "Px": Px,
        "Py": Py,
        "Qx": Qx,
        "Qy": Qy,
        "trace": trace,
        "det": det,
        "re1": np.asarray(re1, dtype=float),
        "re2": np.asarray(re2, dtype=float),
    }


def _broadcast(value, like):
    return np.broadcast_to(np.asarray(value, dtype=float), like.shape).copy()


def jet(field, point, check_input=True):
    """
    First-order jet of the field at a point, computed by forward-mode dual
    numbers (exact up to roundoff).

    parameters
    ----------
    field : dictionary
        Field definition.
    point : sequence of 2 floats
        Finite coordinates (x, y).
    check_input : boolean
        If True, verify if the input is valid. Default is True.

    returns
    -------
    sample : dictionary containing the following keys
        'point' : tuple (x, y)
        'value' : tuple (P, Q)
        'jac' : tuple of tuples ((Px, Py), (Qx, Qy))
        'trace' : float, Px + Qy
        'det' : float, Px * Qy - Py * Qx
        'eig_re' : tuple of the eigenvalue real parts, ascending
    """
    if check_input is True:
        check.is_field(field)
        check.is_point(point)
    x, y = float(point[0]), float(point[1])
    p, q = compile_field(field)
    xd, yd = Dual.variables(x, y)
    try:
        with np.errstate(all="ignore"):
            P = _as_dual(p(xd, yd), x)
            Q = _as_dual(q(xd, yd), x)
    except (ZeroDivisionError, OverflowError) as error:
        raise NonFiniteError("jet undefined at {}: {}".format((x, y), error))
    Px, Py, Qx, Qy = float(P.dx), float(P.dy), float(Q.dx), float(Q.dy)
    values = [float(P.val), float(Q.val), Px, Py, Qx, Qy]
    if all(math.isfinite(v) for v in values) is False:
        raise NonFiniteError("non-finite jet {} at {}".format(values, (x, y)))
    trace = Px + Qy
    det = Px * Qy - Py * Qx
    return {
        "point": (x, y),
        "value": (float(P.val), float(Q.val)),
        "jac": ((Px, Py), (Qx, Qy)),
        "trace": trace,
        "det": det,
        "eig_re": eigen_real_parts(trace, det),
    }


def interval_jet(field, box, check_input=True):
    """
    Interval enclosures of P, Q, the Jacobian, its trace and determinant over
    a box, by the natural interval extension of the syntax trees lifted to
    dual numbers. For 'bump_annulus' the enclosures use the closed forms
    T = -2 alpha - r alpha' and D = 1 + alpha^2 + r alpha alpha'.

    parameters
    ----------
    field : dictionary
        Field definition.
    box : list
        Bounded rectangle [xmin, xmax, ymin, ymax].
    check_input : boolean
        If True, verify if the input is valid. Default is True.

    returns
    -------
    enclosure : dictionary containing the following keys
        'box' : list [xmin, xmax, ymin, ymax]
        'value' : tuple of Intervals (P, Q)
        'jac' : tuple of tuples of Intervals ((Px, Py), (Qx, Qy))
        'trace' : Interval
        'det' : Interval

    Raises ``intervals.EnclosureError`` when the box must be split
    (e.g. division by an interval containing zero).
    """
    if check_input is True:
        check.is_field(field)
        check.is_region(box)
    X = Interval(box[0], box[1])
    Y = Interval(box[2], box[3])
    if field["source"] == "bump_annulus":
        return _bump_interval_jet(field, box, X, Y)
    p, q = compile_field(field)
    xd, yd = Dual.variables(X, Y)
    P = _as_interval_dual(p(xd, yd))
    Q = _as_interval_dual(q(xd, yd))
    trace = P.dx + Q.dy
    det = P.dx * Q.dy - P.dy * Q.dx
    return {
        "box": list(box),
        "value": (P.val, Q.val),
        "jac": ((P.dx, P.dy), (Q.dx, Q.dy)),
        "trace": trace,
        "det": det,
    }


def _as_interval_dual(value):
    if isinstance(value, Dual):
        return Dual(*(_as_interval(v) for v in (value.val, value.dx, value.dy)))
    return Dual(_as_interval(value), Interval(0.0), Interval(0.0))


def _as_interval(value):
    if isinstance(value, Interval):
        return value
    return Interval(value)


def _bump_interval_jet(field, box, X, Y):
    shape = {k: field["parameters"][k] for k in BUMP_SHAPE}
    X2, Y2 = X**2, Y**2
    R2 = X2 + Y2
    r_lo, r_hi = _root_bounds(R2)
    alpha, dalpha = _bump_bounds(r_lo, r_hi, shape)
    if dalpha.hi == 0.0:
        beta = Interval(0.0)
    else:
        # alpha' vanishes for r <= r0
        beta = dalpha / Interval(max(r_lo, shape["r0"]), r_hi)
        beta = Interval(max(0.0, beta.lo), beta.hi)
    XY = X * Y
    Px = -alpha - X2 * beta
    Py = 1.0 - XY * beta
    Qx = -1.0 - XY * beta
    Qy = -alpha - Y2 * beta
    r_dalpha = Interval(r_lo, r_hi) * dalpha
    trace = -2.0 * alpha - r_dalpha
    det = 1.0 + alpha**2 + alpha * r_dalpha
    # magnitudes of the terms a pointwise evaluation adds up
    scale_px = alpha.hi + X2.hi * beta.hi
    scale_qy = alpha.hi + Y2.hi * beta.hi
    scale_cross = 1.0 + XY.mag * beta.hi
    return {
        "box": list(box),
        "value": (
            widen(Y - X * alpha, Y.mag + X.mag * alpha.hi),
            widen(-X - Y * alpha, X.mag + Y.mag * alpha.hi),
        ),
        "jac": (
            (widen(Px, scale_px), widen(Py, scale_cross)),
            (widen(Qx, scale_cross), widen(Qy, scale_qy)),
        ),
        "trace": widen(trace, scale_px + scale_qy),
        "det": widen(det, scale_px * scale_qy + scale_cross**2),
    }
