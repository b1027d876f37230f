"""
Serialization of analysis results: versioned JSON reports and CSV tables.
"""

import json
import datetime
import numpy as np
from . import check, field as fld
from . import constants as cts


def to_builtin(obj):
    """
    Convert a result (nested dictionaries, lists, tuples, numpy arrays and
    scalars) into JSON-compatible Python objects. Non-finite floats become
    None; dictionary keys become strings.
    """
    if isinstance(obj, dict):
        return {str(k): to_builtin(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_builtin(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_builtin(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj) if np.isfinite(obj) else None
    if obj is None or isinstance(obj, str):
        return obj
    raise ValueError("cannot serialize object of type {}".format(type(obj).__name__))


def field_summary(field):
    """
    JSON description of a field: name, text, parameters and analyticity flag.
    """
    check.is_field(field)
    return {
        "name": field["name"],
        "text": fld.to_text(field),
        "parameters": dict(field["parameters"]),
        "analytic": field["analytic"],
    }


def report_to_json(kind, result, field=None, path=None, timestamp=True):
    """
    Wrap a result into the versioned report envelope and render it as JSON
    with sorted keys.

    parameters
    ----------
    kind : string
        Report kind ('verify', 'classification', 'liouville', 'hamiltonian').
    result : dictionary
        Analysis result.
    field : dictionary or None
        Analysed field.
    path : string, pathlib.Path or None
        If given, the report is also written to this file.
    timestamp : boolean
        If False, 'generated_at' is null so that repeated runs produce
        identical bytes.

    returns
    -------
    text : string
        JSON document terminated by a newline.
    """
    generated = None
    if timestamp is True:
        generated = datetime.datetime.now(datetime.timezone.utc).isoformat(timespec="seconds")
    envelope = {
        "schema_version": cts.SCHEMA_VERSION,
        "kind": kind,
        "generated_at": generated,
        "field": None if field is None else field_summary(field),
        "result": to_builtin(result),
    }
    text = json.dumps(envelope, indent=2, sort_keys=True, allow_nan=False) + "\n"
    if path is not None:
        with open(path, "w", encoding="utf-8") as stream:
            stream.write(text)
    return text


def _write_table(path, header, columns):
    table = np.column_stack([np.asarray(c, dtype=float) for c in columns])
    np.savetxt(path, table, fmt="%.17g", delimiter=",", header=header, comments="")


def trajectory_to_csv(path, times, states):
    """
    Write the columns t, x, y of a sampled orbit.
    """
    states = np.asarray(states, dtype=float)
    _write_table(path, "t,x,y", [times, states[:, 0], states[:, 1]])


def orbits_to_csv(path, orbits):
    """
    Write several sampled orbits as rows orbit, t, x, y.

    parameters
    ----------
    orbits : list of (times, states) pairs
    """
    ids, ts, xs, ys = [], [], [], []
    for k, (times, states) in enumerate(orbits):
        states = np.asarray(states, dtype=float)
        ids.append(np.full(len(times), k))
        ts.append(times)
        xs.append(states[:, 0])
        ys.append(states[:, 1])
    table = np.column_stack(
        [np.concatenate(ids), np.concatenate(ts), np.concatenate(xs), np.concatenate(ys)]
    )
    np.savetxt(
        path, table, fmt=["%d", "%.17g", "%.17g", "%.17g"], delimiter=",",
        header="orbit,t,x,y", comments="",
    )


def polygon_to_csv(path, polygon):
    """
    Write the vertices x, y of a polygon.
    """
    check.is_polygon(polygon)
    _write_table(path, "x,y", [polygon[:, 0], polygon[:, 1]])


def returnmap_to_csv(path, samples):
    """
    Write return samples as rows r_in, r_out, flight_time, status. Missing
    values (orbits without return) are written as nan.
    """
    rows = [
        [
            "{:.17g}".format(s["r_in"]),
            "nan" if s["r_out"] is None else "{:.17g}".format(s["r_out"]),
            "nan" if s["flight_time"] is None else "{:.17g}".format(s["flight_time"]),
            s["status"],
        ]
        for s in samples
    ]
    np.savetxt(
        path,
        np.array(rows, dtype=str).reshape(len(rows), 4),
        fmt="%s",
        delimiter=",",
        header="r_in,r_out,flight_time,status",
        comments="",
    )


def grid_to_csv(path, grid):
    """
    Write the values of a scalar grid as a matrix: row i holds
    values[i, :] = H(x[i], y[:]).
    """
    check.is_scalar_grid(grid)
    np.savetxt(path, grid["values"], fmt="%.17g", delimiter=",")
