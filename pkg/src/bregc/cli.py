"""Command-line front end.

Subcommands: ``centroid``, ``histogram-centroid``, ``gaussian-centroid`` and
``cluster``. Each writes a JSON :class:`~bregc.report.RunReport` to stdout
(or ``--output``).

Exit codes: 0 success, 2 input or domain error, 3 no convergence (the report
still carries the best iterate), 4 clustering error.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import centroids as _c
from . import gaussian as _g
from . import multinomial as _m
from . import plotting
from .clustering import ClusteringError, bregman_kmeans
from .errors import BregmanError, ConvergenceError, DomainError
from .generators import GENERATORS, make_generator
from .report import RunReport

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_CONVERGENCE = 3
EXIT_CLUSTER = 4


class InputError(ValueError):
    pass


def _open(path):
    if path == "-":
        return sys.stdin
    try:
        return open(path, newline="")
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None


def read_rows(path, header=False):
    """Numeric CSV rows as (line number, list of floats); blank lines are skipped."""
    fh = _open(path)
    try:
        rows = []
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if header and lineno == 1:
                continue
            cells = [c.strip() for c in row]
            if not any(cells):
                continue
            try:
                rows.append((lineno, [float(c) for c in cells]))
            except ValueError:
                raise InputError(f"{path}, line {lineno}: cannot parse {','.join(row)!r} as numbers") from None
        return rows
    finally:
        if fh is not sys.stdin:
            fh.close()


def read_points(path, header=False):
    rows = read_rows(path, header)
    if not rows:
        raise InputError(f"{path}: no data rows")
    width = len(rows[0][1])
    for lineno, values in rows:
        if len(values) != width:
            raise InputError(f"{path}, line {lineno}: expected {width} values, got {len(values)}")
    return [ln for ln, _ in rows], np.array([v for _, v in rows], dtype=float)


def read_weights(path, n):
    values = [x for _, row in read_rows(path) for x in row]
    if len(values) != n:
        raise InputError(f"{path}: expected {n} weights, got {len(values)}")
    w = np.array(values, dtype=float)
    if np.any(w < 0) or not np.all(np.isfinite(w)) or w.sum() <= 0:
        raise InputError(f"{path}: weights must be nonnegative with a positive sum")
    return w / w.sum()


def _check_rows(gen, lines, points):
    for lineno, p in zip(lines, points):
        gen.check(p, f"line {lineno}")


def _tolerances(args):
    out = {"tol_lambda": args.tol_lambda, "max_iter": args.max_iter}
    if args.tol_gap is not None:
        out["tol_gap"] = args.tol_gap
    return out


def _fill(report, result):
    report.centroid = result.centroid
    report.lambda_star = result.lambda_star
    report.information_radius = result.information_radius
    report.symmetrized_average = result.symmetrized_average
    report.bisector_gap = result.bisector_gap
    report.iterations = result.iterations


# ---------------------------------------------------------------------------
# commands

def cmd_centroid(args) -> RunReport:
    lines, points = read_points(args.input, args.header)
    gen = make_generator(args.divergence, points.shape[1])
    _check_rows(gen, lines, points)
    weights = read_weights(args.weights, len(points)) if args.weights else None
    ps = _c.as_point_set(gen, points, weights)
    report = RunReport("centroid", ps.n, ps.dimension, args.divergence, args.side)
    report.bounds = list(_c.symmetrized_average_bounds(gen, ps))
    report.extra["geodesic_bounds"] = list(_c.exact_symmetrized_bounds(gen, ps))
    try:
        result = _c.centroid(gen, ps, args.side, **(_tolerances(args) if args.side == "sym" else {}))
    except ConvergenceError as exc:
        report.converged = False
        _fill(report, exc.best)
        return report
    _fill(report, result)
    return report


def cmd_histogram_centroid(args) -> RunReport:
    lines, counts = read_points(args.input, args.header)
    hists = []
    for lineno, row in zip(lines, counts):
        try:
            hists.append(_m.smooth_histogram(row, args.smooth_eps))
        except ValueError as exc:
            raise InputError(f"{args.input}, line {lineno}: {exc}") from None
    weights = read_weights(args.weights, len(hists)) if args.weights else None
    report = RunReport("histogram-centroid", len(hists), counts.shape[1], "multinomial", args.side)
    gen = _m.make_multinomial(counts.shape[1])
    ps = _c.as_point_set(gen, np.array([_m.histogram_to_natural(h) for h in hists]), weights)
    report.bounds = list(_c.symmetrized_average_bounds(gen, ps))
    report.extra["geodesic_bounds"] = list(_c.exact_symmetrized_bounds(gen, ps))

    tol = _tolerances(args)
    try:
        hc = _m.histogram_centroid(hists, args.side, weights, **tol)
    except ConvergenceError as exc:
        report.converged = False
        _fill(report, exc.best)
        report.centroid = _m.natural_to_histogram(exc.best.centroid)
        return report
    _fill(report, hc.result)
    report.centroid = hc.histogram
    report.extra.update({
        "natural": hc.result.centroid,
        "natural_right": hc.natural_right,
        "natural_left": hc.natural_left,
        "arithmetic": hc.arithmetic,
        "geometric": hc.geometric,
    })
    if args.plot:
        sym = hc if hc.result.side == "symmetrized" else _m.histogram_skl_centroid(hists, weights, **tol)
        rows = plotting.histogram_table(hists, hc.arithmetic, hc.geometric, sym.histogram)
        table = plotting.write_table(rows, args.plot)
        report.extra["plot_csv"] = str(table)
        if not args.no_figure:
            fig = plotting.render_histogram_figure(rows, plotting.figure_path(table),
                                                   title="histogram centroids")
            report.extra["plot_figure"] = str(fig)
    return report


def read_normals(path):
    fh = _open(path)
    try:
        data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc})") from None
    finally:
        if fh is not sys.stdin:
            fh.close()
    if not isinstance(data, list) or not data:
        raise InputError(f"{path}: expected a non-empty JSON array of {{mean, cov}} objects")
    normals = []
    for i, item in enumerate(data):
        try:
            normals.append(_g.GaussianSource(item["mean"], item["cov"]))
        except (KeyError, TypeError):
            raise InputError(f"{path}: element {i} needs 'mean' and 'cov'") from None
        except (DomainError, ValueError) as exc:
            raise InputError(f"{path}: element {i}: {exc}") from None
    return normals


def _normal_dict(g):
    return {"mean": g.mean, "cov": g.cov}


def cmd_gaussian_centroid(args) -> RunReport:
    normals = read_normals(args.input)
    weights = read_weights(args.weights, len(normals)) if args.weights else None
    d = normals[0].dimension
    report = RunReport("gaussian-centroid", len(normals), d, "gaussian", args.side)
    gen = _g.gaussian_generator(d)
    ps = _c.as_point_set(gen, np.array([_g.natural_vector(g) for g in normals]), weights)
    report.bounds = list(_c.symmetrized_average_bounds(gen, ps))
    report.extra["geodesic_bounds"] = list(_c.exact_symmetrized_bounds(gen, ps))
    try:
        gc = _g.gaussian_centroids(normals, weights, args.side, **_tolerances(args))
    except ConvergenceError as exc:
        report.converged = False
        _fill(report, exc.best)
        report.centroid = _normal_dict(_g.source_from_vector(exc.best.centroid, d))
        report.information_radius = exc.best.symmetrized_average
        return report
    _fill(report, gc.result)
    report.centroid = _normal_dict(gc.normal)
    # radius of a normal centroid: average symmetrized KL to the inputs
    report.information_radius = gc.information_radius
    report.extra["natural"] = gc.result.centroid
    if gc.midpoint is not None:
        report.extra["midpoint"] = _normal_dict(gc.midpoint)
        report.extra["midpoint_radius"] = gc.midpoint_radius
    return report


def cmd_cluster(args) -> RunReport:
    lines, points = read_points(args.input, args.header)
    gen = make_generator(args.divergence, points.shape[1])
    _check_rows(gen, lines, points)
    report = RunReport("cluster", len(points), points.shape[1], args.divergence, args.side)
    try:
        res = bregman_kmeans(gen, points, args.k, args.side, seed=args.seed,
                             max_rounds=args.max_rounds, **_tolerances(args))
    except (ClusteringError, ConvergenceError) as exc:
        raise _ClusterFailure(str(exc)) from None
    report.centroid = res.centers
    report.information_radius = res.loss
    report.iterations = res.iterations
    report.extra.update({
        "k": args.k,
        "seed": args.seed,
        "assignments": res.assignments,
        "loss_trace": res.loss_trace,
    })
    return report


class _ClusterFailure(Exception):
    pass


# ---------------------------------------------------------------------------
# argument parsing

def _add_common(p, sides, default_side):
    p.add_argument("--input", required=True, help="input file ('-' for stdin)")
    p.add_argument("--side", choices=sides, default=default_side)
    p.add_argument("--weights", help="CSV of nonnegative weights, one per input item")
    p.add_argument("--tol-lambda", type=float, default=_c.DEFAULT_TOL_LAMBDA)
    p.add_argument("--tol-gap", type=float, default=None,
                   help="default: 1e-10 * (1 + D(c_R||c_L))")
    p.add_argument("--max-iter", type=int, default=_c.DEFAULT_MAX_ITER)
    p.add_argument("--output", help="write the JSON report here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bregc", description="Bregman centroids and clustering")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("centroid", help="sided or symmetrized centroid of CSV points")
    _add_common(p, ["right", "left", "sym"], "sym")
    p.add_argument("--divergence", required=True, choices=list(GENERATORS))
    p.add_argument("--header", action="store_true", help="skip the first CSV row")
    p.set_defaults(func=cmd_centroid)

    p = sub.add_parser("histogram-centroid", help="KL centroids of histograms given as raw counts")
    _add_common(p, ["right", "left", "sym", "kl-right", "kl-left"], "sym")
    p.add_argument("--smooth-eps", type=float, default=_m.DEFAULT_EPS_FRACTION)
    p.add_argument("--header", action="store_true")
    p.add_argument("--plot", help="write plot data (CSV) here and a PNG figure next to it")
    p.add_argument("--no-figure", action="store_true", help="with --plot, skip the PNG")
    p.set_defaults(func=cmd_histogram_centroid)

    p = sub.add_parser("gaussian-centroid", help="entropic centroids of multivariate normals (JSON)")
    _add_common(p, ["right", "left", "sym", "midpoint", "kl-right", "kl-left"], "sym")
    p.set_defaults(func=cmd_gaussian_centroid)

    p = sub.add_parser("cluster", help="Bregman k-means")
    _add_common(p, ["right", "left", "sym"], "right")
    p.add_argument("--divergence", required=True, choices=list(GENERATORS))
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-rounds", type=int, default=100)
    p.add_argument("--header", action="store_true")
    p.set_defaults(func=cmd_cluster)
    return parser


def _emit(report, output):
    text = report.to_json()
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    try:
        report = args.func(args)
    except _ClusterFailure as exc:
        print(f"bregc: clustering error: {exc}", file=sys.stderr)
        return EXIT_CLUSTER
    except (InputError, BregmanError, ValueError) as exc:
        print(f"bregc: {exc}", file=sys.stderr)
        return EXIT_INPUT
    report.wall_time_ms = 1000.0 * (time.perf_counter() - start)
    _emit(report, args.output)
    return EXIT_OK if report.converged else EXIT_CONVERGENCE


if __name__ == "__main__":
    sys.exit(main())
