"""besselmeans command line.

    besselmeans verify [--criteria 1,2,inv] [--out report.json] [--format json|csv]
    besselmeans mean --field j_gamma --x 0.3,0.7 --radii 0:4:9
    besselmeans transform table.csv --direction forward --out image.csv
    besselmeans reconstruct --points ray --count 13 --out recon

Exit status: 0 when every check passes, 1 on a failed check or a data
error found during computation, 2 on invalid input.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

import numpy as np

from .config import ConfigError, RunConfig
from .fields import BUILTIN_FIELDS, builtin_field, default_xi
from .gridio import TableFormatError, format_number, read_grid_csv, table_field, write_grid_csv
from .hankel import grid_transform
from .means import spherical_mean
from .quadrature import QuadOrders
from .reconstruct import SupportError, make_phantom, reconstruct_double_sphere, reconstruct_radial
from .special import j_gamma, normalized_j
from .verify import SUITES, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

MEAN_TOL = 1e-8
RECON_TOL = 1e-2


class UsageError(Exception):
    def __init__(self, field_name: str, message: str):
        super().__init__(f"{field_name}: {message}")
        self.field = field_name


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _floats(text: str, name: str):
    try:
        return [float(v) for v in text.replace(",", " ").split()]
    except ValueError:
        raise UsageError(name, f"expected numbers, got {text!r}") from None


def _range_or_list(text: str, name: str):
    """'a:b:k' is k evenly spaced values from a to b; otherwise a list."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise UsageError(name, "range must be start:stop:count")
        lo, hi = _floats(parts[0], name) + _floats(parts[1], name)
        try:
            count = int(parts[2])
        except ValueError:
            raise UsageError(name, f"count must be an integer, got {parts[2]!r}") from None
        if count < 1:
            raise UsageError(name, "count must be at least 1")
        return list(np.linspace(lo, hi, count))
    values = _floats(text, name)
    if not values:
        raise UsageError(name, "no values given")
    return values


def _common(p: argparse.ArgumentParser):
    p.add_argument("--n", type=int, default=None, help="dimension (default 2, or the length of --gamma)")
    p.add_argument("--gamma", default=None, help="weight multi-index, e.g. '1,1' (default all ones)")
    d = QuadOrders()
    p.add_argument("--order-sphere", type=int, default=d.sphere)
    p.add_argument("--order-shift", type=int, default=d.shift)
    p.add_argument("--order-radial", type=int, default=d.radial)
    p.add_argument("--order-transform", type=int, default=d.transform)
    p.add_argument("--lambda", dest="lam", type=float, default=1.0, help="Ewald radius parameter")
    p.add_argument("--delta", type=float, default=0.2, help="support margin of the phantom")
    p.add_argument("--rtrunc", type=float, default=12.0, help="truncation radius of transforms")
    p.add_argument("--tol", type=float, default=None, help="override every tolerance")
    p.add_argument("--out", default=None, help="output path (stdout if omitted)")
    p.add_argument("--format", dest="fmt", default="json", help="report format: json or csv")
    p.add_argument("--allow-singular", action="store_true", help="accept n + |gamma| < 3")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="besselmeans", description="Weighted spherical means and "
                                     "Fourier-Bessel reconstruction: checks and batch evaluation.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="run the verification suites")
    _common(p)
    p.add_argument("--criteria", default=None,
                   help=f"comma-separated subset of {','.join(SUITES)} (default all)")

    p = sub.add_parser("mean", help="weighted spherical means at a point")
    _common(p)
    src = p.add_mutually_exclusive_group()
    src.add_argument("--field", default="gaussian", help=f"builtin field: {', '.join(BUILTIN_FIELDS)}")
    src.add_argument("--table", default=None, help="grid table CSV to interpolate instead")
    p.add_argument("--x", default=None, help="centre point (default 0.5 in every coordinate)")
    p.add_argument("--radii", default="0:3:7", help="list '0,0.5,1' or range 'start:stop:count'")

    p = sub.add_parser("transform", help="Fourier-Bessel transform of a grid table")
    _common(p)
    p.add_argument("table", help="input grid table CSV")
    p.add_argument("--direction", choices=("forward", "inverse"), default="forward")
    p.add_argument("--targets", default=None,
                   help="output axis, list or 'start:stop:count', shared by all coordinates "
                        "(default: the input axes)")

    p = sub.add_parser("reconstruct", help="reconstruct a phantom from Ewald-ball data")
    _common(p)
    p.add_argument("--points", choices=("ray", "grid"), default="ray")
    p.add_argument("--count", type=int, default=13, help="points per axis")
    p.add_argument("--extent", type=float, default=3.0, help="largest output coordinate")
    p.add_argument("--amplitude", type=float, default=1.0)
    p.add_argument("--sharpness", type=float, default=1.0)
    p.add_argument("--radius", type=float, default=None,
                   help="data radius (default 2 lambda (1 - delta)); 2 lambda or more is rejected")
    return parser


def config_from_args(args) -> RunConfig:
    gamma = None if args.gamma is None else tuple(_floats(args.gamma, "gamma"))
    n = args.n
    if n is None:
        n = len(gamma) if gamma else 2
    if gamma is None:
        gamma = (1.0,) * max(n, 0)
    try:
        orders = QuadOrders(args.order_sphere, args.order_shift, args.order_radial, args.order_transform)
    except ValueError as exc:
        name = next((k for k in ("sphere", "shift", "radial", "transform") if f"'{k}'" in str(exc)), "order")
        raise ConfigError(f"order-{name}", "must be a positive integer") from None
    return RunConfig(n=n, gamma=gamma, orders=orders, tol=args.tol, rtrunc=args.rtrunc, lam=args.lam,
                     delta=args.delta, out=args.out, fmt=args.fmt, allow_singular=args.allow_singular)


def _emit(text: str, path):
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _header(cfg: RunConfig, extra=()):
    lines = [f"# {k}: {v}" for k, v in cfg.echo().items()]
    lines += [f"# {k}: {v}" for k, v in extra]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_verify(cfg: RunConfig, args) -> int:
    keys = None
    if args.criteria:
        keys = [k.strip() for k in args.criteria.split(",") if k.strip()]
        unknown = [k for k in keys if k not in SUITES]
        if unknown or not keys:
            raise UsageError("criteria", f"unknown suite(s) {unknown}; choose from {', '.join(SUITES)}")
    report = run_suite(cfg, keys)
    _emit(report.to_json() if cfg.fmt == "json" else report.to_csv(), cfg.out)
    s = report.summary()
    print(f"verify: {s['passed']}/{s['checks']} checks passed", file=sys.stderr)
    for r in report.records:
        if not r.passed:
            print(f"  FAIL {r.check_id}: rel {r.rel_diff:.3e} > tol {r.tolerance:.1e}", file=sys.stderr)
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_mean(cfg: RunConfig, args) -> int:
    radii = np.array(_range_or_list(args.radii, "radii"))
    if np.any(radii < 0):
        raise UsageError("radii", "radii must be nonnegative")
    x = np.full(cfg.n, 0.5) if args.x is None else np.array(_floats(args.x, "x"))
    if x.size != cfg.n:
        raise UsageError("x", f"expected {cfg.n} coordinates, got {x.size}")
    if np.any(x < 0):
        raise UsageError("x", "the point must lie in the closed positive orthant")

    closed = None
    if args.table is not None:
        table, _ = _load_table(args.table)
        if table.dim != cfg.n or tuple(table.gamma) != cfg.gamma:
            raise UsageError("gamma", f"table has n={table.dim}, gamma={table.gamma}; "
                                      f"configuration has n={cfg.n}, gamma={cfg.gamma}")
        f, source = table_field(table), args.table
    else:
        if args.field not in BUILTIN_FIELDS:
            raise UsageError("field", f"unknown builtin {args.field!r}; choose from {', '.join(BUILTIN_FIELDS)}")
        f, source = builtin_field(args.field, cfg.gamma), args.field
        if args.field == "j_gamma":
            xi = default_xi(cfg.n)
            order = 0.5 * (cfg.n + sum(cfg.gamma) - 2.0)
            closed = j_gamma(cfg.gamma, x, xi) * normalized_j(order, radii * np.linalg.norm(xi))

    means = np.atleast_1d(spherical_mean(cfg.gamma, f, x, radii, cfg.orders))
    buf = io.StringIO()
    buf.write(_header(cfg, [("field", source), ("x", " ".join(format_number(v) for v in x))]))
    w = csv.writer(buf, lineterminator="\n")
    status = EXIT_OK
    if closed is None:
        w.writerow(["r", "mean"])
        for r, m in zip(radii, means):
            w.writerow([format_number(r), format_number(m)])
    else:
        tol = MEAN_TOL if cfg.tol is None else cfg.tol
        w.writerow(["r", "mean", "closed_form", "diff"])
        for r, m, c in zip(radii, means, closed):
            w.writerow([format_number(r), format_number(m), format_number(c), format_number(m - c)])
        worst = float(np.max(np.abs(means - closed)))
        if not worst <= tol:
            print(f"mean: closed-form difference {worst:.3e} exceeds {tol:.1e}", file=sys.stderr)
            status = EXIT_FAIL
    _emit(buf.getvalue(), cfg.out)
    return status


def _load_table(path):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError("table", f"cannot read {path}: {exc.strerror}") from None
    try:
        return read_grid_csv(text)
    except TableFormatError as exc:
        raise UsageError("table", f"{path}: {exc}") from None


def cmd_transform(cfg: RunConfig, args) -> int:
    table, meta = _load_table(args.table)
    if table.dim != cfg.n or tuple(table.gamma) != cfg.gamma:
        if args.n is not None or args.gamma is not None:
            raise UsageError("gamma", f"table declares n={table.dim}, gamma={table.gamma}; "
                                      f"command line asks for n={cfg.n}, gamma={cfg.gamma}")
        cfg = RunConfig(n=table.dim, gamma=table.gamma, orders=cfg.orders, tol=cfg.tol, rtrunc=cfg.rtrunc,
                        lam=cfg.lam, delta=cfg.delta, out=cfg.out, fmt=cfg.fmt,
                        allow_singular=cfg.allow_singular)
    if args.targets is None:
        targets = table.axes
    else:
        axis = np.array(_range_or_list(args.targets, "targets"))
        if np.any(axis < 0):
            raise UsageError("targets", "target coordinates must be nonnegative")
        targets = (axis,) * table.dim
    try:
        image = grid_transform(table.gamma, table, args.direction, targets, cfg.orders.transform)
    except ValueError as exc:
        raise UsageError("table", str(exc)) from None
    meta_out = {"direction": args.direction, "order_transform": cfg.orders.transform,
                "source": Path(args.table).name}
    _emit(write_grid_csv(image, meta_out), cfg.out)
    return EXIT_OK


def _output_points(n, kind, count, extent):
    if count < 1:
        raise UsageError("count", "need at least one output point")
    if not extent >= 0:
        raise UsageError("extent", "must be nonnegative")
    axis = np.linspace(0.0, extent, count)
    if kind == "ray":
        ys = np.zeros((count, n))
        ys[:, 0] = axis
        return ys
    grids = np.meshgrid(*([axis] * n), indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=-1)


def _dat(ys, cols, names, kind, count):
    lines = ["# " + " ".join([f"y{i + 1}" for i in range(ys.shape[1])] + names)]
    block = count if kind == "grid" and ys.shape[1] > 1 else None
    for k, (y, row) in enumerate(zip(ys, np.column_stack(cols))):
        if block and k and k % block == 0:
            lines.append("")  # gnuplot scan-line break
        lines.append(" ".join(format_number(v) for v in list(y) + list(row)))
    return "\n".join(lines) + "\n"


def cmd_reconstruct(cfg: RunConfig, args) -> int:
    if cfg.n + sum(cfg.gamma) < 3 and not cfg.allow_singular:
        raise UsageError("gamma", f"n + |gamma| = {cfg.n + sum(cfg.gamma):g} < 3; pass --allow-singular")
    if not 0.05 < cfg.delta < 0.5:
        raise UsageError("delta", "phantom margin must lie in (0.05, 0.5)")
    if args.radius is not None and not args.radius > 0:
        raise UsageError("radius", "must be positive")
    ys = _output_points(cfg.n, args.points, args.count, args.extent)
    problem, truth_field = make_phantom(cfg.n, cfg.gamma, cfg.lam, cfg.delta, args.amplitude, args.sharpness,
                                        transform_order=2 * cfg.orders.transform,
                                        allow_singular=cfg.allow_singular, radius=args.radius)
    try:
        dbl = reconstruct_double_sphere(problem, ys, cfg.orders)
        rad = reconstruct_radial(problem, ys, cfg.orders)
    except SupportError as exc:
        print(f"reconstruct: {exc}", file=sys.stderr)
        return EXIT_FAIL
    truth = truth_field(ys)
    sup = float(np.max(np.abs(truth)))
    scale = sup if sup > 0 else 1.0
    err_dbl = np.abs(dbl - truth) / scale
    err_rad = np.abs(rad - truth) / scale
    tol = RECON_TOL if cfg.tol is None else cfg.tol
    gated = cfg.n + sum(cfg.gamma) >= 3
    passed = bool(max(err_dbl.max(), err_rad.max()) <= tol)

    names = ["truth", "double_sphere", "radial", "rel_err_double", "rel_err_radial"]
    cols = [truth, dbl, rad, err_dbl, err_rad]
    extra = [("points", args.points), ("count", args.count), ("extent", format_number(args.extent)),
             ("amplitude", format_number(args.amplitude)), ("sharpness", format_number(args.sharpness)),
             ("data_radius", format_number(problem.rho)), ("error_scale", "max |truth|")]
    buf = io.StringIO()
    buf.write(_header(cfg, extra))
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([f"y{i + 1}" for i in range(cfg.n)] + names)
    for y, row in zip(ys, np.column_stack(cols)):
        w.writerow([format_number(v) for v in list(y) + list(row)])

    summary = {f"config_{k}": v for k, v in cfg.echo().items()}
    summary.update({f"phantom_{k}": v for k, v in extra})
    summary.update({
        "points": int(ys.shape[0]),
        "max_truth": sup,
        "max_rel_err_double": float(err_dbl.max()),
        "mean_rel_err_double": float(err_dbl.mean()),
        "max_rel_err_radial": float(err_rad.max()),
        "mean_rel_err_radial": float(err_rad.mean()),
        "max_path_diff": float(np.max(np.abs(dbl - rad)) / scale),
        "tolerance": tol,
        "gated": gated,
        "passed": passed,
    })
    summary_text = json.dumps(summary, indent=1) + "\n"
    dat_text = _dat(ys, cols, names, args.points, args.count)

    if cfg.out is None:
        sys.stdout.write(buf.getvalue())
        sys.stderr.write(summary_text)
    else:
        base = Path(cfg.out)
        base = base.with_suffix("") if base.suffix in (".csv", ".json", ".dat") else base
        base.with_name(base.name + ".csv").write_text(buf.getvalue())
        base.with_name(base.name + ".json").write_text(summary_text)
        base.with_name(base.name + ".dat").write_text(dat_text)
    if not passed:
        print(f"reconstruct: max relative error exceeds {tol:.1e}", file=sys.stderr)
    return EXIT_OK if passed or not gated else EXIT_FAIL


COMMANDS = {"verify": cmd_verify, "mean": cmd_mean, "transform": cmd_transform, "reconstruct": cmd_reconstruct}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from_args(args)
        return COMMANDS[args.command](cfg, args)
    except (ConfigError, UsageError) as exc:
        print(f"besselmeans {args.command}: invalid {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
