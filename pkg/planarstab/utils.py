import numpy as np
from numba import njit
from . import check


@njit
def shoelace_area(x, y):
    """
    Signed area of the polygon with vertices (x[k], y[k]) by the shoelace
    formula. The closing edge is implicit. Counterclockwise polygons have
    positive area.
    """
    n = x.size
    total = 0.0
    for k in range(n):
        k1 = (k + 1) % n
        total += x[k] * y[k1] - x[k1] * y[k]
    return 0.5 * total


def shoelace_area_np(x, y):
    """
    Signed area of the polygon with vertices (x[k], y[k]) by the shoelace
    formula. The closing edge is implicit. Counterclockwise polygons have
    positive area.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    return 0.5 * np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y)


def polygon_area(polygon, check_input=True):
    """
    Signed area of a polygon given as a numpy array with shape (N, 2).
    """
    if check_input == True:
        check.is_array(polygon, ndim=2)
    x = np.ascontiguousarray(polygon[:, 0], dtype=float)
    y = np.ascontiguousarray(polygon[:, 1], dtype=float)
    return shoelace_area(x, y)


def densify_polygon(polygon, max_edge, check_input=True):
    """
    Insert equally spaced points along the edges of a polygon (closing edge
    included) so that no edge is longer than max_edge.

    parameters
    ----------
    polygon : numpy array 2d
        Vertices with shape (N, 2).
    max_edge : positive scalar
        Maximum edge length.
    check_input : boolean
        If True, verify if the input is valid. Default is True.

    returns
    -------
    dense : numpy array 2d
        Vertices with shape (M, 2), M >= N. The original vertices are kept.
    """
    if check_input == True:
        check.is_polygon(polygon)
        check.is_scalar(max_edge, positive=True)
    following = np.roll(polygon, -1, axis=0)
    lengths = np.hypot(*(following - polygon).T)
    pieces = []
    for start, end, length in zip(polygon, following, lengths):
        n = max(1, int(np.ceil(length / max_edge)))
        s = np.arange(n)[:, np.newaxis] / n
        pieces.append(start + s * (end - start))
    return np.vstack(pieces)


# Symmetric 7-point triangle rule, exact for polynomials of degree 5:
# barycentric coordinates and weights.
_TRIANGLE_RULE = np.array(
    [
        [1 / 3, 1 / 3, 1 / 3, 0.225],
        [0.059715871789770, 0.470142064105115, 0.470142064105115, 0.132394152788506],
        [0.470142064105115, 0.059715871789770, 0.470142064105115, 0.132394152788506],
        [0.470142064105115, 0.470142064105115, 0.059715871789770, 0.132394152788506],
        [0.797426985353087, 0.101286507323456, 0.101286507323456, 0.125939180544827],
        [0.101286507323456, 0.797426985353087, 0.101286507323456, 0.125939180544827],
        [0.101286507323456, 0.101286507323456, 0.797426985353087, 0.125939180544827],
    ]
)


def composite_triangle_rule(n_sub):
    """
    Degree-5 rule applied on each of the n_sub**2 congruent subtriangles of
    the reference triangle.

    returns
    -------
    rule : numpy array 2d
        Rows (l0, l1, l2, weight) of barycentric coordinates and weights
        summing to one.
    """
    corners = []
    for a in range(n_sub):
        for b in range(n_sub - a):
            corners.append([(a, b), (a + 1, b), (a, b + 1)])
            if a + b <= n_sub - 2:
                corners.append([(a + 1, b), (a + 1, b + 1), (a, b + 1)])
    # subtriangle corners in (l1, l2) coordinates
    corners = np.array(corners, dtype=float) / n_sub
    points = np.einsum("kv,mvc->mkc", _TRIANGLE_RULE[:, :3], corners).reshape(-1, 2)
    weights = np.tile(_TRIANGLE_RULE[:, 3], corners.shape[0]) / n_sub**2
    return np.column_stack(
        [1.0 - points[:, 0] - points[:, 1], points[:, 0], points[:, 1], weights]
    )


def polygon_integral(func, polygon, n_sub=1, check_input=True):
    """
    Integral of a smooth function over a simple counterclockwise polygon.
    The polygon is split into a fan of signed triangles with apex at the
    vertex mean, each integrated with the degree-5 7-point rule (composite
    over n_sub**2 subtriangles). Signed contributions cancel outside the
    polygon, so the polygon need not be convex or star-shaped.

    parameters
    ----------
    func : callable
        Vectorized function func(x, y) of numpy arrays 1d.
    polygon : numpy array 2d
        Vertices with shape (N, 2).
    n_sub : int
        Number of subdivisions of each triangle side. Default is 1.
    check_input : boolean
        If True, verify if the input is valid. Default is True.

    returns
    -------
    integral : float
        Approximation of the area integral.
    """
    if check_input == True:
        check.is_polygon(polygon)
        check.is_integer(n_sub, positive=True)
    apex = polygon.mean(axis=0)
    a = polygon
    b = np.roll(polygon, -1, axis=0)
    # signed areas of the triangles (apex, a_k, b_k)
    areas = 0.5 * (
        (a[:, 0] - apex[0]) * (b[:, 1] - apex[1])
        - (b[:, 0] - apex[0]) * (a[:, 1] - apex[1])
    )
    rule = _TRIANGLE_RULE if n_sub == 1 else composite_triangle_rule(n_sub)
    l0, l1, l2, w = rule.T
    x = (
        l0[:, np.newaxis] * apex[0]
        + l1[:, np.newaxis] * a[:, 0]
        + l2[:, np.newaxis] * b[:, 0]
    )
    y = (
        l0[:, np.newaxis] * apex[1]
        + l1[:, np.newaxis] * a[:, 1]
        + l2[:, np.newaxis] * b[:, 1]
    )
    values = np.asarray(func(x.ravel(), y.ravel()), dtype=float).reshape(x.shape)
    return float(np.sum(areas * np.sum(w[:, np.newaxis] * values, axis=0)))


def split_box(box):
    """
    Split a box [xmin, xmax, ymin, ymax] into four congruent children, in the
    order south-west, south-east, north-west, north-east.
    """
    xmin, xmax, ymin, ymax = box
    xm = 0.5 * (xmin + xmax)
    ym = 0.5 * (ymin + ymax)
    return [
        [xmin, xm, ymin, ym],
        [xm, xmax, ymin, ym],
        [xmin, xm, ym, ymax],
        [xm, xmax, ym, ymax],
    ]


def box_area(box):
    return (box[1] - box[0]) * (box[3] - box[2])


def box_center(box):
    return 0.5 * (box[0] + box[1]), 0.5 * (box[2] + box[3])


def box_closest_point(box, point):
    """
    Point of a box closest to a given point.
    """
    return (
        min(max(point[0], box[0]), box[1]),
        min(max(point[1], box[2]), box[3]),
    )


def box_distance(box, point):
    """
    Euclidean distance between a point and a box (zero inside).
    """
    closest = box_closest_point(box, point)
    return float(np.hypot(closest[0] - point[0], closest[1] - point[1]))


def box_max_distance(box, point):
    """
    Largest distance between a point and the corners of a box.
    """
    corners = np.array(
        [[box[0], box[2]], [box[1], box[2]], [box[0], box[3]], [box[1], box[3]]]
    )
    return float(np.max(np.hypot(corners[:, 0] - point[0], corners[:, 1] - point[1])))


def cross(u, v):
    """
    z component of the cross product of planar vectors (broadcasts over
    leading dimensions).
    """
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    return u[..., 0] * v[..., 1] - u[..., 1] * v[..., 0]
