"""``packcell`` command line: validate, cells, density, random, entropy, prove.

Exit codes: 0 when every assertion holds, 1 when a domain assertion fails,
2 when an input is malformed.
"""
from __future__ import annotations

import argparse
import math
import sys
from typing import Sequence

import numpy as np

from . import proof_checks as pc
from .entropy import (
    PiecewiseConstantDensity,
    entropy_estimate,
    exact_entropy,
    gamma_experiment,
    partition_entropy,
)
from .geometry import GeometryError, RectWindow, Window, parse_window, polygon_area, disc_polygon_area
from .io import InputError, dump_packing, dumps, emit, load_packing, load_pointset, make_report, write_csv
from .packing import (
    HEX_RATIO,
    Packing,
    PackingError,
    cells,
    density,
    hexagonal_packing,
    jittered_hexagonal_packing,
    random_critical_packing,
    validate,
)
from .pointset import PointSetError
from .seeding import make_rng

EXIT_OK, EXIT_DOMAIN, EXIT_INPUT = 0, 1, 2
RATIO_TOL = 1e-9


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


def _window_arg(text: str) -> Window:
    try:
        return parse_window(text)
    except GeometryError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _schedule_arg(text: str) -> list[int]:
    try:
        vals = [int(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad schedule {text!r}") from exc
    if not vals:
        raise argparse.ArgumentTypeError("empty schedule")
    return vals


def _levels_arg(text: str) -> np.ndarray:
    """Rows separated by ';', columns by ','; the first row is the bottom of the domain."""
    try:
        rows = [[float(v) for v in row.split(",")] for row in text.split(";")]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad levels {text!r}") from exc
    if len({len(r) for r in rows}) != 1:
        raise argparse.ArgumentTypeError("every levels row needs the same number of entries")
    return np.array(rows)


def _bounding_window(p: Packing) -> RectWindow:
    lo = (p.centers - p.radii[:, None]).min(axis=0)
    hi = (p.centers + p.radii[:, None]).max(axis=0)
    return RectWindow(float(lo[0]), float(lo[1]), float(hi[0]), float(hi[1]))


def _pick_window(flag: Window | None, from_file: Window | None, p: Packing) -> Window:
    if flag is not None:
        return flag
    return from_file if from_file is not None else _bounding_window(p)


def _violations_json(report) -> list[dict]:
    return [{"i": i, "j": j, "distance": d, "reach": reach} for i, j, d, reach in report.violations]


# --- commands ------------------------------------------------------------------

def cmd_validate(args, argv, out) -> int:
    p, _ = load_packing(args.packing)
    rep = validate(p, args.factor)
    summary = {"valid": rep.valid, "discs": len(p), "violations": len(rep.violations), "factor": args.factor}
    emit(dumps(make_report("validate", argv, args.seed, _violations_json(rep), summary)), args.out, out)
    return EXIT_OK if rep.valid else EXIT_DOMAIN


def _require_valid(p: Packing, command: str, args, argv, out) -> bool:
    rep = validate(p)
    if rep.valid:
        return True
    summary = {"valid": False, "violations": len(rep.violations)}
    emit(dumps(make_report(command, argv, args.seed, _violations_json(rep), summary)), args.out, out)
    return False


def cmd_cells(args, argv, out) -> int:
    p, file_window = load_packing(args.packing)
    if not _require_valid(p, "cells", args, argv, out):
        return EXIT_DOMAIN
    w = _pick_window(args.window, file_window, p)
    results, interior = [], []
    for res in cells(p, w):
        area = polygon_area(res.region)
        ratio = disc_polygon_area(p.disc(res.index), res.region) / area if area > 0.0 else None
        if ratio is not None and not res.artificially_bounded:
            interior.append(ratio)
        results.append({"index": res.index, "vertices": res.region, "area": area, "coverage_ratio": ratio,
                        "artificially_bounded": res.artificially_bounded,
                        "neighbors": res.active_neighbors()})
    max_ratio = max(interior) if interior else None
    exceed = sum(r > HEX_RATIO + RATIO_TOL for r in interior)
    summary = {"window": w, "cells": len(results), "interior_cells": len(interior),
               "max_interior_ratio": max_ratio, "bound": HEX_RATIO, "tolerance": RATIO_TOL,
               "exceeding_bound": exceed}
    emit(dumps(make_report("cells", argv, args.seed, results, summary)), args.out, out)
    return EXIT_OK if exceed == 0 else EXIT_DOMAIN


def shrink_scales(k: int) -> list[float]:
    """k scale factors from 0.5 up to 1 in equal steps (side 40 gives 20, 30, 40 for k = 3)."""
    if k < 1:
        raise InputError("--shrink must be at least 1")
    if k == 1:
        return [1.0]
    return [0.5 + 0.5 * j / (k - 1) for j in range(k)]


def cmd_density(args, argv, out) -> int:
    p, file_window = load_packing(args.packing)
    if not _require_valid(p, "density", args, argv, out):
        return EXIT_DOMAIN
    w = _pick_window(args.window, file_window, p)
    rows = []
    for s in shrink_scales(args.shrink):
        sub = w.scaled_about_center(s)
        size = sub.xmax - sub.xmin if isinstance(sub, RectWindow) else 2.0 * sub.radius
        rows.append({"scale": s, "size": size, "area": sub.area, "density": density(p, sub)})
    summary = {"window": w, "bound": HEX_RATIO,
               "max_density": max(r["density"] for r in rows)}
    if args.csv:
        emit(write_csv(["scale", "size", "area", "density"],
                       [[r["scale"], r["size"], r["area"], r["density"]] for r in rows]), args.csv, out)
    emit(dumps(make_report("density", argv, args.seed, rows, summary)), args.out, out)
    return EXIT_OK


def cmd_random(args, argv, out) -> int:
    w = args.window
    rng = make_rng(args.seed)
    if args.kind == "rsa":
        if args.n < 2:
            raise InputError("--n must be at least 2")
        p = random_critical_packing(args.n, w, rng)
    elif args.kind == "hex":
        p = hexagonal_packing(args.spacing, w)
    else:
        p = jittered_hexagonal_packing(args.spacing, w, args.jitter, rng)
    emit(dump_packing(p, w), args.out, out)
    return EXIT_OK


TABLE_COLUMNS = ["N", "estimator", "partition_entropy", "exact_entropy", "gap"]


def cmd_entropy(args, argv, out) -> int:
    dom = args.domain
    if not isinstance(dom, RectWindow):
        raise InputError("--domain must be a rectangle")
    if args.levels is not None:
        try:
            rho = PiecewiseConstantDensity.from_weights(dom, args.levels)
        except ValueError as exc:
            raise InputError(str(exc)) from exc
    else:
        rho = PiecewiseConstantDensity.uniform(dom)
    exact = exact_entropy(rho)
    if args.points is not None:
        X = load_pointset(args.points, dom)
        if X.N < 2:
            print("error: the estimator needs at least two points", file=sys.stderr)
            return EXIT_DOMAIN
        est = entropy_estimate(X)
        pe = partition_entropy(X) if args.partition else None
        table = [[X.N, est, pe, exact, est - exact]]
        targets = [X.N]
    else:
        if args.schedule is None:
            raise InputError("--schedule is required with --generate")
        mode = {"hexagonal": "hexagonal", "square-grid": "square", "iid": "iid"}[args.generate]
        try:
            rows = gamma_experiment(rho, args.schedule, mode, args.seed, partition=args.partition)
        except PointSetError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_DOMAIN
        table = [[r.N, r.estimator, r.partition_entropy, r.exact_entropy, r.gap] for r in rows]
        targets = [r.n_target for r in rows]
    text = write_csv(TABLE_COLUMNS, table)
    emit(text, args.out, out)
    if args.report:
        results = [{"n_target": n, **dict(zip(TABLE_COLUMNS, row))} for n, row in zip(targets, table)]
        summary = {"exact_entropy": exact, "rows": len(table), "final_gap": table[-1][-1]}
        emit(dumps(make_report("entropy", argv, args.seed, results, summary)), args.report, out)
    return EXIT_OK


CHECKS = ("g", "claim1", "alpha", "cos2", "oa2", "p3")


def _run_check(name: str, args) -> tuple[dict, bool]:
    """(report entry, whether it counts toward the exit code)."""
    if name == "g":
        spec = pc.SweepSpec(nx=args.grid, nalpha=args.grid)
        if args.regime_violation:
            spec = pc.SweepSpec(x_range=(0.0, math.pi / 2 - 1e-3), alpha_range=(0.0, math.pi / 2),
                                nx=args.grid, nalpha=args.grid, enforce_regime=False)
        rep = pc.check_g_monotone(spec)
        entry = {"check": "g", "min_slope": rep.min_slope, "argmin": rep.argmin,
                 "negative_count": rep.negative_count, "points": rep.points, "tolerance": rep.tolerance,
                 "regime_enforced": spec.enforce_regime, "ok": rep.ok}
        return entry, not args.regime_violation
    if name == "claim1":
        reps = [pc.check_claim1(x, args.trials, args.seed) for x in (0.0, 0.05, 0.1, 0.155)]
        entry = {"check": "claim1", "trials": args.trials,
                 "cases": [{"x": r.x, "admitted": r.admitted, "violations": r.violations,
                            "r_bounds": r.r_bounds, "r_seen": r.r_seen, "d_bounds": r.d_bounds,
                            "d_seen": r.d_seen, "max_line_error": r.max_line_error, "ok": r.ok} for r in reps],
                 "violations": sum(r.violations for r in reps), "ok": all(r.ok for r in reps)}
        return entry, True
    if name == "alpha":
        rep = pc.check_lemma_alpha_extremes()
        entry = {"check": "alpha", "cos_first": rep.cos_first, "cos_second": rep.cos_second,
                 "printed_bounds": rep.printed_bounds, "cos_pi_6": rep.cos_pi_6,
                 "cos_first_unrounded": rep.cos_first_unrounded,
                 "cos_second_unrounded": rep.cos_second_unrounded, "margin": rep.margin, "ok": rep.ok}
        return entry, True
    if name == "cos2":
        rep = pc.check_case3_inequality(max(args.grid * 25, 100))
        entry = {"check": "cos2", "min_margin": rep.min_margin, "argmin": rep.argmin, "points": rep.points,
                 "min_ratio_slope": rep.min_ratio_slope, "ratio_at_pi_6": rep.ratio_at_pi_6,
                 "tolerance": rep.tolerance, "ok": rep.ok}
        return entry, True
    if name == "oa2":
        rep = pc.check_oa2_bound(args.trials, args.seed)
        entry = {"check": "oa2", "max_oa2": rep.max_oa2, "bound": rep.bound,
                 "max_ratio_beyond": rep.max_ratio_beyond, "min_margin": rep.min_margin,
                 "inversion_error": rep.inversion_error, "ok": rep.ok}
        return entry, True
    rep = pc.check_lemma_p3()
    entry = {"check": "p3", "max_ratio": rep.max_ratio, "argmax": rep.argmax, "points": rep.points,
             "margin": rep.margin, "ok": rep.ok}
    return entry, True


def cmd_prove(args, argv, out) -> int:
    names = CHECKS if args.check == "all" else (args.check,)
    results, failed = [], 0
    for name in names:
        entry, counts = _run_check(name, args)
        results.append(entry)
        if counts and not entry["ok"]:
            failed += 1
    summary = {"checks": len(results), "failed": failed, "notice": pc.NOTICE}
    emit(dumps(make_report("prove", argv, args.seed, results, summary)), args.out, out)
    return EXIT_OK if failed == 0 else EXIT_DOMAIN


# --- wiring --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="seed for every random choice (default 0)")
    common.add_argument("--out", default=None, help="output path (default stdout)")

    parser = _Parser(prog="packcell", description="Cells of disc packings and entropy estimators.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("validate", parents=[common], help="check the inflation condition")
    p.add_argument("packing")
    p.add_argument("--factor", type=float, default=2.0)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("cells", parents=[common], help="cells, areas and coverage ratios")
    p.add_argument("packing")
    p.add_argument("--window", type=_window_arg, default=None, help="rect:xmin,ymin,xmax,ymax or disc:cx,cy,r")
    p.set_defaults(func=cmd_cells)

    p = sub.add_parser("density", parents=[common], help="densities over nested concentric windows")
    p.add_argument("packing")
    p.add_argument("--window", type=_window_arg, default=None)
    p.add_argument("--shrink", type=int, default=1, help="number of nested windows, scaled 0.5 to 1")
    p.add_argument("--csv", default=None, help="also write the table as CSV")
    p.set_defaults(func=cmd_density)

    p = sub.add_parser("random", parents=[common], help="generate a valid critical packing")
    p.add_argument("--n", type=int, default=50)
    p.add_argument("--window", type=_window_arg, default=RectWindow(0.0, 0.0, 1.0, 1.0))
    p.add_argument("--kind", choices=("rsa", "hex", "jitter"), default="rsa")
    p.add_argument("--spacing", type=float, default=2.0, help="lattice spacing for hex and jitter")
    p.add_argument("--jitter", type=float, default=0.1, help="displacement as a fraction of the spacing")
    p.set_defaults(func=cmd_random)

    p = sub.add_parser("entropy", parents=[common], help="entropy estimator convergence table (CSV)")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("points", nargs="?", default=None, help="point-set CSV with header x,y")
    src.add_argument("--generate", choices=("hexagonal", "square-grid", "iid"))
    p.add_argument("--domain", type=_window_arg, default=RectWindow(0.0, 0.0, 1.0, 1.0))
    p.add_argument("--schedule", type=_schedule_arg, default=None, help="comma-separated target sizes")
    p.add_argument("--levels", type=_levels_arg, default=None,
                   help="piecewise-constant weights: rows ';' separated, bottom row first")
    p.add_argument("--no-partition", dest="partition", action="store_false",
                   help="skip the mixed-partition estimator")
    p.add_argument("--report", default=None, help="also write a JSON report")
    p.set_defaults(func=cmd_entropy)

    p = sub.add_parser("prove", parents=[common], help="numeric margins of the closed-form inequalities")
    p.add_argument("--check", choices=("all",) + CHECKS, default="all")
    p.add_argument("--grid", type=int, default=400, help="grid points per axis for sweeps")
    p.add_argument("--trials", type=int, default=10_000)
    p.add_argument("--regime-violation", action="store_true",
                   help="sweep g outside x <= pi/6 <= alpha (informational, never fails)")
    p.set_defaults(func=cmd_prove)
    return parser


def main(argv: Sequence[str] | None = None, stdout=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    out = stdout if stdout is not None else sys.stdout
    try:
        args = build_parser().parse_args(argv)
        return args.func(args, argv, out)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (PackingError, PointSetError, GeometryError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
