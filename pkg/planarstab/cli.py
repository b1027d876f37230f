"""
Command line front end: ``planarstab <command> [options]``.

Commands
--------
verify       certify the hypotheses on a region -> report.json
classify     locate and classify critical points -> classification.json
portrait     phase portrait -> portrait.svg, orbits.csv
poincare     return map profile on a ray -> returnmap.csv
liouville    area derivative versus trace integral -> liouville.json
hamiltonian  Hamiltonian reconstruction -> hgrid.csv, hamiltonian.json

Exit status is 0 on success, 2 when the hypotheses are violated or not
certified, and 1 on usage or runtime errors.
"""

import argparse
import logging
import math
import os
import pathlib
import sys
import numpy as np
from . import (
    classify,
    data_structures,
    flow,
    hamiltonian,
    plot_functions,
    poincare,
    reports,
    verify,
    field as fld,
)

logger = logging.getLogger(__name__)

OUTPUT_DIR_VARIABLE = "PLANARSTAB_OUTPUT_DIR"

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NOT_CERTIFIED = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


##### option types


def _floats(text, n):
    try:
        values = [float(v) for v in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError("expected {} comma separated numbers".format(n))
    if len(values) != n:
        raise argparse.ArgumentTypeError("expected {} comma separated numbers".format(n))
    if not all(math.isfinite(v) for v in values):
        raise argparse.ArgumentTypeError("numbers must be finite")
    return values


def region_type(text):
    values = _floats(text, 4)
    if values[0] >= values[1] or values[2] >= values[3]:
        raise argparse.ArgumentTypeError("region must satisfy xmin < xmax and ymin < ymax")
    return values


def point_type(text):
    return tuple(_floats(text, 2))


def positive_float(text):
    value = _floats(text, 1)[0]
    if value <= 0:
        raise argparse.ArgumentTypeError("value must be positive")
    return value


def positive_int(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("expected an integer")
    if value < 1:
        raise argparse.ArgumentTypeError("value must be positive")
    return value


##### field files


def read_field_file(path):
    """
    Read a field file: lines ``P = <expr>``, ``Q = <expr>``,
    ``param <name> = <value>`` and ``analytic = true|false``; text after
    ``#`` is ignored.

    returns
    -------
    field : dictionary
    """
    path = pathlib.Path(path)
    definitions = {}
    params = {}
    analytic = False
    for number, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError("{}:{}: expected 'name = value'".format(path, number))
        key, value = (part.strip() for part in line.split("=", 1))
        if key in ("P", "Q"):
            if key in definitions:
                raise ValueError("{}:{}: {} defined twice".format(path, number, key))
            definitions[key] = value
        elif key.startswith("param "):
            name = key[len("param "):].strip()
            if not name.isidentifier():
                raise ValueError("{}:{}: invalid parameter name".format(path, number))
            try:
                params[name] = float(value)
            except ValueError:
                raise ValueError("{}:{}: parameter value must be a number".format(path, number))
        elif key == "analytic":
            if value.lower() not in ("true", "false"):
                raise ValueError("{}:{}: analytic must be true or false".format(path, number))
            analytic = value.lower() == "true"
        else:
            raise ValueError("{}:{}: unknown entry {}".format(path, number, key))
    for key in ("P", "Q"):
        if key not in definitions:
            raise ValueError("{}: missing definition of {}".format(path, key))
    src = "P = {} ; Q = {}".format(definitions["P"], definitions["Q"])
    return fld.parse_field(src, params, name=path.stem, analytic=analytic)


##### commands


def _field(args):
    if args.builtin is not None:
        return fld.builtin(args.builtin)
    return read_field_file(args.field)


def _config(args):
    return data_structures.integrator_config(rtol=args.rtol, atol=args.atol)


def _write(args, name, kind, result, field):
    path = args.out / name
    reports.report_to_json(kind, result, field, path=path, timestamp=not args.no_timestamp)
    logger.info("wrote %s", path)


def command_verify(args):
    field = _field(args)
    result = verify.verify_hypotheses(
        field, args.region, max_depth=args.max_depth, k_radius=args.k_radius
    )
    for report in result:
        logger.info("%s: %s", report["property"], report["status"])
    _write(args, "report.json", "verify", {"region": args.region, "reports": result}, field)
    if any(r["status"] == "VIOLATED" for r in result):
        return EXIT_NOT_CERTIFIED
    return EXIT_OK


def command_classify(args):
    field = _field(args)
    points = verify.find_critical_points(field, args.region, shape=args.seeds)
    if not points["points"]:
        raise RuntimeError("no critical point found in {}".format(args.region))
    classifications = []
    for point in points["points"]:
        result = classify.classify_critical_point(
            field, point, args.region, config=_config(args), max_depth=args.max_depth
        )
        logger.info("%s: %s", point, result["verdict"])
        classifications.append(result)
    _write(
        args,
        "classification.json",
        "classification",
        {"critical_points": points, "classifications": classifications},
        field,
    )
    if any(c["verdict"] == "HYPOTHESES_NOT_CERTIFIED" for c in classifications):
        return EXIT_NOT_CERTIFIED
    return EXIT_OK


def command_portrait(args):
    field = _field(args)
    rng = np.random.default_rng(args.seed)
    region = args.region
    starts = np.column_stack(
        [
            rng.uniform(region[0], region[1], args.orbits),
            rng.uniform(region[2], region[3], args.orbits),
        ]
    )
    config = _config(args)
    orbits = []
    for x0 in starts:
        trajectory = flow.integrate(field, tuple(x0), args.time, config)
        orbits.append(flow.sample_trajectory(trajectory, args.samples))
    points = verify.find_critical_points(field, region, shape=(5, 5))["points"]
    reports.orbits_to_csv(args.out / "orbits.csv", orbits)
    plot_functions.plot_portrait(
        field, region, [states for _, states in orbits], points=points,
        save=args.out / "portrait.svg",
    )
    logger.info("wrote %s and %s", args.out / "portrait.svg", args.out / "orbits.csv")
    return EXIT_OK


def command_poincare(args):
    field = _field(args)
    section = data_structures.section(args.center, args.direction)
    cycles = poincare.detect_cycles(
        field, section, args.r_range, grid_n=args.n, config=_config(args)
    )
    for band in cycles["neutral_bands"]:
        logger.info("neutral band [%.6g, %.6g]", *band)
    for cycle in cycles["isolated"]:
        logger.info("%s cycle at r = %.10g", cycle["stability"].lower(), cycle["r"])
    reports.returnmap_to_csv(args.out / "returnmap.csv", cycles["samples"])
    logger.info("wrote %s", args.out / "returnmap.csv")
    return EXIT_OK


def command_liouville(args):
    field = _field(args)
    if args.polygon is not None:
        polygon = np.loadtxt(args.polygon, delimiter=",", skiprows=1, ndmin=2)
    else:
        cx, cy, radius = args.circle
        polygon = data_structures.circle_polygon((cx, cy), radius, args.vertices)
    result = flow.liouville_residual(field, polygon, _config(args), h=args.step)
    logger.info("dA/dt = %.12g, integral of T = %.12g", result["dA_dt"], result["integral_T"])
    _write(args, "liouville.json", "liouville", result, field)
    return EXIT_OK


def command_hamiltonian(args):
    field = _field(args)
    shape = (args.n, args.n)
    try:
        H = hamiltonian.reconstruct_hamiltonian(
            field, args.base, args.region, shape=shape, path=args.path
        )
    except hamiltonian.PathDependenceError as error:
        logger.error("%s", error)
        return EXIT_NOT_CERTIFIED
    residual = hamiltonian.hamiltonian_residual(field, H, args.samples, args.seed)
    x0 = args.x0
    if x0 is None:
        x0 = (
            0.5 * (args.base[0] + args.region[1]),
            args.base[1],
        )
    conservation = hamiltonian.conservation_check(field, H, x0, args.time, _config(args))
    reports.grid_to_csv(args.out / "hgrid.csv", H)
    result = {
        "base": args.base,
        "path": args.path,
        "region": args.region,
        "shape": shape,
        "spacing": data_structures.region_grid_spacing(args.region, shape),
        "residual": residual,
        "conservation": conservation,
        "hessian": hamiltonian.hessian_extremum(field, args.base),
    }
    logger.info("residual %.3g, drift %.3g", residual, conservation["drift"])
    _write(args, "hamiltonian.json", "hamiltonian", result, field)
    return EXIT_OK


##### parser


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    source = common.add_mutually_exclusive_group(required=True)
    source.add_argument("--builtin", choices=fld.BUILTINS, help="built-in field")
    source.add_argument("--field", type=pathlib.Path, help="field file (P = ..., Q = ...)")
    common.add_argument(
        "--region", type=region_type, default=[-5.0, 5.0, -5.0, 5.0],
        help="xmin,xmax,ymin,ymax (default -5,5,-5,5)",
    )
    common.add_argument(
        "--out", type=pathlib.Path, default=None,
        help="output directory (default ${} or the current directory)".format(OUTPUT_DIR_VARIABLE),
    )
    common.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
    common.add_argument(
        "--no-timestamp", action="store_true", help="omit the timestamp from JSON reports"
    )
    common.add_argument("--rtol", type=positive_float, default=1e-10, help="integrator rtol")
    common.add_argument("--atol", type=positive_float, default=1e-12, help="integrator atol")
    common.add_argument("--max-depth", type=positive_int, default=12, help="box subdivisions")
    verbosity = common.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="store_true")
    verbosity.add_argument("-q", "--quiet", action="store_true")

    parser = _Parser(prog="planarstab", description="Stability analysis of planar fields.")
    commands = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = commands.add_parser("verify", parents=[common], help="certify the hypotheses")
    p.add_argument("--k-radius", type=positive_float, default=None,
                   help="eigenvalue condition only outside this disk")
    p.set_defaults(run=command_verify)

    p = commands.add_parser("classify", parents=[common], help="classify critical points")
    p.add_argument("--seeds", type=positive_int, default=9, help="Newton seeds per axis")
    p.set_defaults(run=command_classify)

    p = commands.add_parser("portrait", parents=[common], help="phase portrait (SVG)")
    p.add_argument("--orbits", type=positive_int, default=12, help="number of orbits")
    p.add_argument("--time", type=positive_float, default=20.0, help="integration time")
    p.add_argument("--samples", type=positive_int, default=400, help="points per orbit")
    p.set_defaults(run=command_portrait)

    p = commands.add_parser("poincare", parents=[common], help="return map profile")
    p.add_argument("--center", type=point_type, default=(0.0, 0.0))
    p.add_argument("--direction", type=point_type, default=(1.0, 0.0))
    p.add_argument("--r-range", type=point_type, default=(0.1, 3.0))
    p.add_argument("--n", type=positive_int, default=64, help="grid samples")
    p.set_defaults(run=command_poincare)

    p = commands.add_parser("liouville", parents=[common], help="Liouville residual")
    p.add_argument("--polygon", type=pathlib.Path, default=None,
                   help="CSV file with header x,y and counterclockwise vertices")
    p.add_argument("--circle", type=lambda s: _floats(s, 3), default=[0.0, 0.0, 1.0],
                   help="cx,cy,radius of a regular polygon (default 0,0,1)")
    p.add_argument("--vertices", type=positive_int, default=256)
    p.add_argument("--step", type=positive_float, default=1e-3, help="transport time h")
    p.set_defaults(run=command_liouville)

    p = commands.add_parser("hamiltonian", parents=[common], help="Hamiltonian reconstruction")
    p.add_argument("--base", type=point_type, default=(0.0, 0.0))
    p.add_argument("--path", choices=["xy", "yx"], default="xy")
    p.add_argument("--n", type=positive_int, default=257, help="grid nodes per axis")
    p.add_argument("--samples", type=positive_int, default=1000)
    p.add_argument("--x0", type=point_type, default=None, help="start of the conserved orbit")
    p.add_argument("--time", type=positive_float, default=20.0)
    p.set_defaults(run=command_hamiltonian)

    return parser


# values such as -10,10,-10,10 would be taken for options
COORDINATE_OPTIONS = (
    "--region", "--center", "--direction", "--r-range", "--circle", "--base", "--x0",
)


def _attach_values(argv):
    joined = []
    k = 0
    while k < len(argv):
        if argv[k] in COORDINATE_OPTIONS and k + 1 < len(argv):
            joined.append("{}={}".format(argv[k], argv[k + 1]))
            k += 2
        else:
            joined.append(argv[k])
            k += 1
    return joined


def _configure_logging(args):
    level = logging.INFO
    if args.verbose:
        level = logging.DEBUG
    elif args.quiet:
        level = logging.ERROR
    logging.basicConfig(
        level=level, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr, force=True
    )
    logging.captureWarnings(True)


def main(argv=None):
    """
    Run a command and return its exit status.
    """
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = parser.parse_args(_attach_values(argv))
    except UsageError as error:
        print("planarstab: error: {}".format(error), file=sys.stderr)
        return EXIT_ERROR
    _configure_logging(args)
    if args.command == "classify":
        args.seeds = (args.seeds, args.seeds)
    out = args.out if args.out is not None else os.environ.get(OUTPUT_DIR_VARIABLE, ".")
    args.out = pathlib.Path(out)
    try:
        args.out.mkdir(parents=True, exist_ok=True)
        return args.run(args)
    except (ValueError, RuntimeError, OSError, ArithmeticError) as error:
        logger.error("%s", error)
        return EXIT_ERROR
