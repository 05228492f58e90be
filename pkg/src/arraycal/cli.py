"""Command line front end: simulate, validate, ingest, localize.

Exit codes: 0 success (all tolerance checks passed), 1 validation failure
(a tolerance was exceeded), 2 usage or input errors. stdout carries a
one-line summary; machine-readable output goes only to the requested files.
"""

import argparse
import json
import sys

import numpy as np

from .experiments import histogram, run_monte_carlo, trial_f_values, write_histogram_csv
from .ingest import inject_offsets, load_toa_csv, save_toa_csv, write_audit_json
from .localize import SolveOptions, procrustes_rmse, solve
from .mapping import column_means, map_timing, read_mapped_values, residual
from .scene import SceneConfig
from .timing import tdoa_from_toa


def _positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1, got {value}")
    return value


def _nonnegative_int(text):
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be non-negative, got {value}")
    return value


def _positive_float(text):
    value = float(text)
    if not value > 0.0:
        raise argparse.ArgumentTypeError(f"must be positive, got {value}")
    return value


def _nonnegative_float(text):
    value = float(text)
    if value < 0.0:
        raise argparse.ArgumentTypeError(f"must be non-negative, got {value}")
    return value


def _room(text):
    parts = text.split("x")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"room must look like 10x10x3, got {text!r}")
    try:
        sides = tuple(float(p) for p in parts)
    except ValueError:
        raise argparse.ArgumentTypeError(f"room must look like 10x10x3, got {text!r}") from None
    if any(s <= 0.0 for s in sides):
        raise argparse.ArgumentTypeError("room sides must be positive")
    return sides


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="arraycal",
        description="Asynchronous microphone array self-calibration toolkit.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="Monte Carlo validation over random scenes")
    sim.add_argument("--mics", type=_positive_int, required=True)
    sim.add_argument("--srcs", type=_positive_int, required=True)
    sim.add_argument("--trials", type=_positive_int, required=True)
    sim.add_argument("--room", type=_room, default=(10.0, 10.0, 3.0), help="LxWxH in meters")
    sim.add_argument("--speed", type=_positive_float, default=340.0)
    sim.add_argument("--offset-range", type=_nonnegative_float, default=1.0)
    sim.add_argument("--seed", type=_nonnegative_int, required=True)
    sim.add_argument("--tol", type=_positive_float, default=1e-12)
    sim.add_argument("--report", help="write the report JSON here")
    sim.add_argument("--hist", help="write a histogram CSV of mapped values here")
    sim.add_argument("--bins", type=_positive_int, default=100)
    sim.add_argument("--workers", type=_positive_int, default=1)
    sim.set_defaults(func=_cmd_simulate)

    val = sub.add_parser("validate", help="identity and zero-mean checks on a TOA CSV")
    val.add_argument("--toa", required=True, help="path to a TOA matrix CSV")
    val.add_argument("--ref-mic", type=_nonnegative_int, default=0)
    val.add_argument("--ref-src", type=_nonnegative_int, default=0)
    val.add_argument("--tol", type=_positive_float, default=1e-12)
    val.add_argument("--report", help="write the report JSON here")
    val.set_defaults(func=_cmd_validate)

    ing = sub.add_parser("ingest", help="inject synthetic clock offsets into a TOA CSV")
    ing.add_argument("--toa", required=True)
    ing.add_argument("--offset-range", type=_nonnegative_float, required=True)
    ing.add_argument("--seed", type=_nonnegative_int, required=True)
    ing.add_argument("--scale", type=_positive_float, default=1.0)
    ing.add_argument("--header", action="store_true", help="skip one header line")
    ing.add_argument("--out", required=True, help="write the contaminated matrix here")
    ing.add_argument("--audit", required=True, help="write the drawn offsets here")
    ing.set_defaults(func=_cmd_ingest)

    loc = sub.add_parser("localize", help="recover geometry from a mapped-matrix CSV")
    loc.add_argument("--mapped", required=True)
    loc.add_argument("--speed", type=_positive_float, default=340.0)
    loc.add_argument("--restarts", type=_positive_int, default=1)
    loc.add_argument("--seed", type=_nonnegative_int, required=True)
    loc.add_argument("--truth", help="scene JSON with mics/srcs for Procrustes scoring")
    loc.add_argument("--out", required=True, help="write the estimate JSON here")
    loc.set_defaults(func=_cmd_localize)

    return parser


def _write_json(path, data) -> None:
    with open(path, "w") as fh:
        json.dump(data, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _cmd_simulate(args) -> int:
    config = SceneConfig(
        num_mics=args.mics,
        num_srcs=args.srcs,
        room=args.room,
        offset_range=args.offset_range,
        speed=args.speed,
        seed=args.seed,
    )
    report = run_monte_carlo(config, args.trials, args.tol, workers=args.workers)
    if args.report:
        with open(args.report, "w") as fh:
            fh.write(report.to_json())
    if args.hist:
        values = np.concatenate(
            [trial_f_values(config, t).ravel() for t in range(args.trials)]
        )
        lo, hi = report.f_min, report.f_max
        if not lo < hi:  # degenerate spread (e.g. 1x1 scenes)
            lo, hi = lo - 0.5, hi + 0.5
        rows = histogram(values, args.bins, (lo, hi))
        write_histogram_csv(rows, args.hist)
    status = "PASS" if report.passed else "FAIL"
    print(
        f"{status} trials={report.num_trials} points={report.data_points} "
        f"max|dF|={report.max_abs_residual_toa_tdoa:.3e} "
        f"max|colmean|={report.max_abs_column_mean:.3e} "
        f"f_range=[{report.f_min:.4f}, {report.f_max:.4f}] tol={report.tolerance:g}"
    )
    return 0 if report.passed else 1


def _cmd_validate(args) -> int:
    toa = load_toa_csv(args.toa)
    tdoa = tdoa_from_toa(toa, args.ref_mic)
    mapped_toa = map_timing(toa, args.ref_src)
    mapped_tdoa = map_timing(tdoa, args.ref_src)
    max_identity = float(np.abs(residual(mapped_toa, mapped_tdoa)).max())
    max_colmean = float(
        max(np.abs(column_means(mapped_toa)).max(), np.abs(column_means(mapped_tdoa)).max())
    )
    passed = max(max_identity, max_colmean) < args.tol
    report = {
        "source": args.toa,
        "rows": toa.num_mics,
        "cols": toa.num_srcs,
        "data_points": toa.num_mics * toa.num_srcs,
        "ref_mic": args.ref_mic,
        "ref_src": args.ref_src,
        "tolerance": args.tol,
        "max_abs_residual_toa_tdoa": max_identity,
        "max_abs_column_mean": max_colmean,
        "f_min": float(mapped_toa.values.min()),
        "f_max": float(mapped_toa.values.max()),
        "passed": passed,
    }
    if args.report:
        _write_json(args.report, report)
    status = "PASS" if passed else "FAIL"
    print(
        f"{status} points={report['data_points']} max|dF|={max_identity:.3e} "
        f"max|colmean|={max_colmean:.3e} "
        f"f_range=[{report['f_min']:.4f}, {report['f_max']:.4f}] tol={args.tol:g}"
    )
    return 0 if passed else 1


def _cmd_ingest(args) -> int:
    toa = load_toa_csv(args.toa, scale=args.scale, skip_header=args.header)
    contaminated, delta, eta = inject_offsets(toa, args.offset_range, args.seed)
    save_toa_csv(contaminated, args.out)
    write_audit_json(args.audit, delta, eta, args.seed)
    print(
        f"wrote {contaminated.num_mics}x{contaminated.num_srcs} TOA matrix to "
        f"{args.out} (offsets in [-{args.offset_range:g}, {args.offset_range:g}] s, "
        f"audit in {args.audit})"
    )
    return 0


def _cmd_localize(args) -> int:
    observed = read_mapped_values(args.mapped)
    opts = SolveOptions(num_restarts=args.restarts, seed=args.seed)
    estimate = solve(observed, args.speed, opts=opts)
    out = {
        "mics": estimate.mics.tolist(),
        "srcs": estimate.srcs.tolist(),
        "final_cost": estimate.final_cost,
        "iterations": estimate.iterations,
        "converged": estimate.converged,
    }
    summary = (
        f"{'converged' if estimate.converged else 'stopped'} "
        f"cost={estimate.final_cost:.3e} iterations={estimate.iterations}"
    )
    if args.truth:
        with open(args.truth) as fh:
            truth = json.load(fh)
        truth_cloud = np.vstack([np.asarray(truth["mics"]), np.asarray(truth["srcs"])])
        est_cloud = np.vstack([estimate.mics, estimate.srcs])
        rmse = procrustes_rmse(est_cloud, truth_cloud)
        out["procrustes_rmse"] = rmse
        summary += f" procrustes_rmse={rmse:.3e}"
    _write_json(args.out, out)
    print(summary)
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (OSError, ValueError, TypeError, IndexError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
