"""
Static phase portraits with Matplotlib: nullclines, orbits, critical points
and cycles, saved as SVG.
"""

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np
from . import check, field as fld


def nullcline_grid(field, region, shape=(201, 201)):
    """
    Sample P and Q on a regular grid covering a region.

    returns
    -------
    X, Y, P, Q : numpy arrays 2d with the given shape (indexing 'ij').
    """
    check.is_region(region)
    check.is_shape(shape)
    x = np.linspace(region[0], region[1], shape[0])
    y = np.linspace(region[2], region[3], shape[1])
    X, Y = np.meshgrid(x, y, indexing="ij")
    with np.errstate(over="ignore", invalid="ignore"):
        P, Q = fld.velocity_function(field, check_input=False)(X, Y)
    return X, Y, np.asarray(P) * np.ones_like(X), np.asarray(Q) * np.ones_like(X)


def plot_portrait(
    field,
    region,
    orbits,
    points=None,
    cycle=None,
    shape=(201, 201),
    size=(6, 6),
    title=None,
    save=None,
):
    """
    Draw the phase portrait of a field: the nullclines P = 0 (blue) and
    Q = 0 (red), a bundle of orbits, critical points and an optional cycle.

    parameters
    ----------
    field : dictionary
        Field definition.
    region : list
        Plotted rectangle [xmin, xmax, ymin, ymax].
    orbits : list of numpy arrays 2d
        Orbit polylines with shape (N, 2).
    points : list of (x, y) or None
        Critical points.
    cycle : numpy array 2d or None
        Closed orbit polyline (drawn dashed).
    shape : tuple
        Grid used to trace the nullclines.
    size : tuple
        Figure size in inches.
    title : string or None
        Figure title. Default is the field name.
    save : string, pathlib.Path or None
        SVG file. The output carries no date and a fixed hash salt, so
        identical inputs give identical files.

    returns
    -------
    fig : matplotlib Figure (closed when saved)
    """
    check.is_field(field)
    X, Y, P, Q = nullcline_grid(field, region, shape)
    with plt.rc_context({"svg.hashsalt": "planarstab", "svg.fonttype": "none"}):
        fig, ax = plt.subplots(figsize=size)
        ax.set_aspect("equal")
        ax.set_title(field["name"] if title is None else title, fontsize=12)
        for values, color in [(P, "tab:blue"), (Q, "tab:red")]:
            if np.nanmin(values) < 0 < np.nanmax(values):
                ax.contour(X, Y, values, levels=[0.0], colors=color, linewidths=1.0)
        for orbit in orbits:
            ax.plot(orbit[:, 0], orbit[:, 1], color="0.3", linewidth=0.7)
            ax.plot(orbit[0, 0], orbit[0, 1], ".", color="0.3", markersize=3)
        if cycle is not None:
            closed = np.vstack([cycle, cycle[:1]])
            ax.plot(closed[:, 0], closed[:, 1], "k--", linewidth=1.5)
        if points:
            points = np.asarray(points, dtype=float)
            ax.plot(points[:, 0], points[:, 1], "ko", markersize=5)
        ax.set_xlim(region[0], region[1])
        ax.set_ylim(region[2], region[3])
        ax.set_xlabel("x", fontsize=12)
        ax.set_ylabel("y", fontsize=12)
        if save is not None:
            fig.savefig(save, format="svg", metadata={"Date": None})
            plt.close(fig)
    return fig
