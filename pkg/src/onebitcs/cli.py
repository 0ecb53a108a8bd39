"""Benchmark harness: generate / solve / sweep / certify.

Instances travel as JSON manifests (generation recipe + seed) and are
regenerated bit-for-bit on demand, so matrices are never stored.  Sweeps
emit one CSV row per (grid point, trial, solver) with a trailing summary
block of per-grid-point means; metric columns are reproducible across
reruns and across serial/parallel execution (time_ms excepted).

Exit codes: 0 success, 1 runtime failure, 2 usage error.
"""

import argparse
import concurrent.futures
import json
import math
import os
import sys
import time

import numpy as np

from .biht import biht_solve
from .datagen import GenSpec, generate
from .exceptions import ZeroSignalError
from .gpsp import SolverConfig, gpsp_solve
from .metrics import hamming_distance, hamming_error, snr
from .model import Iterate, ModelParams, default_params
from .optimality import certify_global
from .rng import derive_seed

CSV_HEADER = (
    "seed,n,m,s_star,r,v,eta,epsilon,k,solver,"
    "snr_db,hd,he,time_ms,iterations,termination"
)

_SOLVERS = ("gpsp", "biht")


def _fmt(value):
    if value is None:
        return ""
    if isinstance(value, float):
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return repr(value)
    return str(value)


def _manifest_dict(spec, example):
    return {
        "example": example,
        "n": spec.n,
        "m": spec.m,
        "s_star": spec.s_star,
        "r": spec.r,
        "v": spec.v,
        "noise_sigma": spec.noise_sigma,
        "seed": spec.seed,
    }


def _manifest_bytes(manifest):
    return (json.dumps(manifest, sort_keys=True, indent=2) + "\n").encode()


def _load_manifest(path):
    with open(path) as fh:
        data = json.load(fh)
    example = data.get("example")
    if example not in ("independent", "correlated"):
        raise ValueError(f"manifest example must be independent|correlated, got {example!r}")
    spec = GenSpec(
        n=int(data["n"]),
        m=int(data["m"]),
        s_star=int(data["s_star"]),
        r=float(data["r"]),
        v=None if data.get("v") is None else float(data["v"]),
        noise_sigma=float(data.get("noise_sigma", 0.1)),
        seed=int(data["seed"]),
    )
    if example == "correlated" and spec.v is None:
        raise ValueError("correlated manifest requires v")
    if example == "independent" and spec.v is not None:
        raise ValueError("independent manifest must not set v")
    return spec, example


def _solve_row(spec, example, solver, *, s, k, eta, epsilon, beta, rho, tol,
               max_iter, biht_step, biht_max_iter):
    """One deterministic benchmark row; metrics empty on zero-signal."""
    prob, truth = generate(spec)
    s_eff = spec.s_star if s is None else s
    if k is None:
        k = int(math.ceil(0.01 * prob.m - 1e-9))
    row = {
        "seed": spec.seed,
        "n": spec.n,
        "m": spec.m,
        "s_star": spec.s_star,
        "r": spec.r,
        "v": spec.v,
        "eta": eta,
        "epsilon": epsilon,
        "k": k,
        "solver": solver,
        "snr_db": None,
        "hd": None,
        "he": None,
        "time_ms": None,
        "iterations": None,
        "termination": "failed",
    }
    try:
        start = time.perf_counter()
        if solver == "gpsp":
            params = ModelParams(epsilon=epsilon, eta=eta, s=s_eff, k=k)
            cfg = SolverConfig(beta=beta, rho=rho, tol=tol, max_iter=max_iter)
            result = gpsp_solve(prob, params, cfg)
        else:
            result = biht_solve(prob, s_eff, step=biht_step, max_iter=biht_max_iter)
        elapsed_ms = (time.perf_counter() - start) * 1000.0
    except ZeroSignalError:
        row["termination"] = "zero_signal"
        return row, None
    row["snr_db"] = snr(result.x_bar, truth.x_true)
    row["hd"] = hamming_distance(prob, result.x_bar)
    row["he"] = hamming_error(prob, result.x_bar, truth.c_true)
    row["time_ms"] = elapsed_ms
    row["iterations"] = result.iterations
    row["termination"] = result.termination
    return row, result


def _row_to_csv(row):
    fields = [
        row["seed"], row["n"], row["m"], row["s_star"], row["r"], row["v"],
        row["eta"], row["epsilon"], row["k"], row["solver"], row["snr_db"],
        row["hd"], row["he"], row["time_ms"], row["iterations"],
        row["termination"],
    ]
    return ",".join(_fmt(f) for f in fields)


# ---------------------------------------------------------------- generate


def _cmd_generate(args, parser):
    example = {"ind": "independent", "independent": "independent",
               "cor": "correlated", "correlated": "correlated"}.get(args.example)
    if example is None:
        parser.error(f"--example must be ind or cor, got {args.example!r}")
    if not 0 <= args.r < 1:
        parser.error(f"--r must lie in [0, 1), got {args.r}")
    if example == "correlated" and args.v is None:
        parser.error("--v is required for --example cor")
    if args.v is not None and not 0 < args.v < 1:
        parser.error(f"--v must lie in (0, 1), got {args.v}")
    if not 1 <= args.s_star <= args.n:
        parser.error(f"--s-star must lie in [1, n], got {args.s_star}")
    if args.noise_sigma < 0:
        parser.error(f"--noise-sigma must be non-negative, got {args.noise_sigma}")
    try:
        spec = GenSpec(
            n=args.n, m=args.m, s_star=args.s_star, r=args.r,
            v=args.v if example == "correlated" else None,
            noise_sigma=args.noise_sigma, seed=args.seed,
        )
    except ValueError as exc:
        parser.error(str(exc))
    payload = _manifest_bytes(_manifest_dict(spec, example))
    if args.out:
        with open(args.out, "wb") as fh:
            fh.write(payload)
    else:
        sys.stdout.write(payload.decode())
    if args.dump_matrix:
        # matrices are regenerable from the manifest; this export is for
        # interop only (.txt -> one row per line, else raw row-major float64)
        prob, _ = generate(spec)
        if args.dump_matrix.endswith(".txt"):
            np.savetxt(args.dump_matrix, prob.phi)
        else:
            prob.phi.tofile(args.dump_matrix)
    return 0


# ------------------------------------------------------------------- solve


def _cmd_solve(args, parser):
    if args.solver not in _SOLVERS:
        parser.error(f"--solver must be one of {'|'.join(_SOLVERS)}, got {args.solver!r}")
    spec, example = _load_manifest(args.manifest)
    row, result = _solve_row(
        spec, example, args.solver,
        s=args.s, k=args.k, eta=args.eta, epsilon=args.epsilon,
        beta=args.beta, rho=args.rho, tol=args.tol, max_iter=args.max_iter,
        biht_step=args.step, biht_max_iter=args.biht_max_iter,
    )
    if args.header:
        print(CSV_HEADER)
    print(_row_to_csv(row))
    if args.dump_iterate and result is not None:
        dump = {
            "x": result.x_raw.tolist(),
            "y": None if result.y_raw is None else result.y_raw.tolist(),
            "params": {
                "epsilon": args.epsilon,
                "eta": args.eta,
                "s": spec.s_star if args.s is None else args.s,
                "k": row["k"],
            },
        }
        with open(args.dump_iterate, "w") as fh:
            json.dump(dump, fh)
            fh.write("\n")
    return 0


# ------------------------------------------------------------------- sweep


def _sweep_tasks(args, parser, example):
    """Cartesian grid over the list-valued flags, one task per (point, trial,
    solver)."""
    grid = []
    for n in args.n:
        for m in args.m:
            for s_star in args.s_star:
                for r in args.r:
                    for v in (args.v if example == "correlated" else [None]):
                        for eta in args.eta:
                            for epsilon in args.epsilon:
                                for k in args.k:
                                    grid.append(
                                        dict(n=n, m=m, s_star=s_star, r=r, v=v,
                                             eta=eta, epsilon=epsilon, k=k)
                                    )
    if not grid:
        parser.error("sweep grid is empty")
    tasks = []
    for gi, point in enumerate(grid):
        for trial in range(args.trials):
            seed = derive_seed(args.master_seed, gi, trial)
            for solver in args.solvers:
                tasks.append((gi, trial, solver, point, seed))
    return grid, tasks


def _run_sweep_task(task_args):
    gi, trial, solver, point, seed, knobs = task_args
    spec = GenSpec(
        n=point["n"], m=point["m"], s_star=point["s_star"], r=point["r"],
        v=point["v"], noise_sigma=knobs["noise_sigma"], seed=seed,
    )
    example = "correlated" if point["v"] is not None else "independent"
    try:
        row, _ = _solve_row(
            spec, example, solver,
            s=None, k=point["k"], eta=point["eta"], epsilon=point["epsilon"],
            beta=knobs["beta"], rho=knobs["rho"], tol=knobs["tol"],
            max_iter=knobs["max_iter"], biht_step=knobs["biht_step"],
            biht_max_iter=knobs["biht_max_iter"],
        )
    except Exception:  # failed trials keep their row; the sweep continues
        row = {
            "seed": seed, "n": point["n"], "m": point["m"],
            "s_star": point["s_star"], "r": point["r"], "v": point["v"],
            "eta": point["eta"], "epsilon": point["epsilon"], "k": point["k"],
            "solver": solver, "snr_db": None, "hd": None, "he": None,
            "time_ms": None, "iterations": None, "termination": "failed",
        }
    return gi, trial, solver, row


def _summarize(rows_by_grid, grid):
    lines = ["# summary: per grid point and solver, means over successful trials"]
    for gi, point in enumerate(grid):
        for solver in sorted({r["solver"] for (g, r) in rows_by_grid if g == gi}):
            rows = [r for (g, r) in rows_by_grid if g == gi and r["solver"] == solver]
            ok = [r for r in rows if r["snr_db"] is not None]
            excluded = len(rows) - len(ok)
            means = {}
            for key in ("snr_db", "hd", "he", "time_ms", "iterations"):
                means[key] = (
                    float(np.mean([r[key] for r in ok])) if ok else None
                )
            desc = ",".join(f"{key}={_fmt(val)}" for key, val in point.items())
            stats = ",".join(f"{key}_mean={_fmt(val)}" for key, val in means.items())
            lines.append(
                f"# grid={gi},{desc},solver={solver},trials_ok={len(ok)},"
                f"excluded={excluded},{stats}"
            )
    return lines


def _emit_svg(path, title, xs, series):
    """Hand-rolled line chart: one polyline per named series."""
    width, height, pad = 640, 400, 48
    finite = [y for ys in series.values() for y in ys if y is not None and math.isfinite(y)]
    if not finite or len(xs) < 2:
        return False
    lo, hi = min(finite), max(finite)
    if hi == lo:
        hi = lo + 1.0
    x_lo, x_hi = min(xs), max(xs)
    if x_hi == x_lo:
        x_hi = x_lo + 1.0

    def sx(x):
        return pad + (x - x_lo) / (x_hi - x_lo) * (width - 2 * pad)

    def sy(y):
        return height - pad - (y - lo) / (hi - lo) * (height - 2 * pad)

    colors = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"]
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width/2}" y="20" text-anchor="middle" font-size="14">{title}</text>',
        f'<line x1="{pad}" y1="{height-pad}" x2="{width-pad}" y2="{height-pad}" stroke="black"/>',
        f'<line x1="{pad}" y1="{pad}" x2="{pad}" y2="{height-pad}" stroke="black"/>',
        f'<text x="{pad}" y="{height-pad+16}" font-size="10">{x_lo:g}</text>',
        f'<text x="{width-pad}" y="{height-pad+16}" text-anchor="end" font-size="10">{x_hi:g}</text>',
        f'<text x="{pad-4}" y="{height-pad}" text-anchor="end" font-size="10">{lo:.3g}</text>',
        f'<text x="{pad-4}" y="{pad+4}" text-anchor="end" font-size="10">{hi:.3g}</text>',
    ]
    for idx, (name, ys) in enumerate(sorted(series.items())):
        pts = [
            f"{sx(x):.1f},{sy(y):.1f}"
            for x, y in zip(xs, ys)
            if y is not None and math.isfinite(y)
        ]
        if not pts:
            continue
        color = colors[idx % len(colors)]
        parts.append(
            f'<polyline fill="none" stroke="{color}" stroke-width="1.5" '
            f'points="{" ".join(pts)}"/>'
        )
        parts.append(
            f'<text x="{width-pad}" y="{pad + 14*idx}" text-anchor="end" '
            f'fill="{color}" font-size="12">{name}</text>'
        )
    parts.append("</svg>")
    with open(path, "w") as fh:
        fh.write("\n".join(parts) + "\n")
    return True


def _emit_sweep_charts(out_path, grid, rows_by_grid, solvers):
    """One chart per grid variable that actually varies, mean SNR vs value."""
    stem = os.path.splitext(out_path)[0]
    written = []
    for var in ("n", "m", "s_star", "r", "v", "eta", "epsilon", "k"):
        values = sorted({p[var] for p in grid if p[var] is not None})
        if len(values) < 2:
            continue
        series = {}
        for solver in solvers:
            ys = []
            for val in values:
                keep = [
                    r["snr_db"]
                    for (g, r) in rows_by_grid
                    if grid[g][var] == val and r["solver"] == solver
                    and r["snr_db"] is not None and math.isfinite(r["snr_db"])
                ]
                ys.append(float(np.mean(keep)) if keep else None)
            series[solver] = ys
        path = f"{stem}_{var}.svg"
        if _emit_svg(path, f"mean snr_db vs {var}", values, series):
            written.append(path)
    return written


def _cmd_sweep(args, parser):
    example = {"ind": "independent", "independent": "independent",
               "cor": "correlated", "correlated": "correlated"}.get(args.example)
    if example is None:
        parser.error(f"--example must be ind or cor, got {args.example!r}")
    if args.trials < 1:
        parser.error(f"--trials must be at least 1, got {args.trials}")
    solvers = [s.strip() for s in args.solvers.split(",") if s.strip()]
    if not solvers or any(s not in _SOLVERS for s in solvers):
        parser.error(f"--solvers must name solvers from {{{'|'.join(_SOLVERS)}}}")
    args.solvers = solvers
    if example == "correlated" and not args.v:
        parser.error("--v is required for --example cor")
    grid, tasks = _sweep_tasks(args, parser, example)
    knobs = {
        "beta": args.beta, "rho": args.rho, "tol": args.tol,
        "max_iter": args.max_iter, "biht_step": args.step,
        "biht_max_iter": args.biht_max_iter, "noise_sigma": args.noise_sigma,
    }
    packed = [(gi, trial, solver, point, seed, knobs)
              for (gi, trial, solver, point, seed) in tasks]
    workers = args.workers if args.workers else (os.cpu_count() or 1)
    results = []
    if workers == 1:
        for task in packed:
            results.append(_run_sweep_task(task))
    else:
        with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_sweep_task, packed, chunksize=1))
    results.sort(key=lambda item: (item[0], item[1], item[2]))
    rows_by_grid = [(gi, row) for (gi, trial, solver, row) in results]
    lines = [CSV_HEADER]
    lines.extend(_row_to_csv(row) for (_, row) in rows_by_grid)
    lines.extend(_summarize(rows_by_grid, grid))
    payload = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(payload)
    else:
        sys.stdout.write(payload)
    if args.svg and args.out:
        _emit_sweep_charts(args.out, grid, rows_by_grid, solvers)
    return 0


# ----------------------------------------------------------------- certify


def _cmd_certify(args, parser):
    spec, example = _load_manifest(args.manifest)
    with open(args.iterate) as fh:
        dump = json.load(fh)
    prob, _ = generate(spec)
    saved = dump.get("params", {})
    params = ModelParams(
        epsilon=args.epsilon if args.epsilon is not None else float(saved.get("epsilon", 0.01)),
        eta=args.eta if args.eta is not None else float(saved.get("eta", 1e-4)),
        s=args.s if args.s is not None else int(saved.get("s", spec.s_star)),
        k=args.k if args.k is not None else int(saved.get("k", default_params(prob, s=spec.s_star).k)),
    )
    if dump.get("y") is None:
        parser.error("iterate dump lacks the y block; certify needs a full iterate")
    z = Iterate(
        x=np.asarray(dump["x"], dtype=np.float64),
        y=np.asarray(dump["y"], dtype=np.float64),
    )
    report = certify_global(prob, params, z, tol=args.tol)
    print(json.dumps(report.to_dict(), indent=2, sort_keys=True))
    return 0


# -------------------------------------------------------------------- main


def _float_list(text):
    return [float(tok) for tok in text.split(",") if tok.strip() != ""]


def _int_list(text):
    return [int(tok) for tok in text.split(",") if tok.strip() != ""]


def _int_or_none_list(text):
    return [None if tok.strip() in ("", "auto") else int(tok) for tok in text.split(",")]


def build_parser():
    parser = argparse.ArgumentParser(
        prog="onebitcs",
        description="One-bit compressive sensing benchmark harness",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="write an instance manifest")
    gen.add_argument("--example", required=True, help="ind | cor")
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--m", type=int, required=True)
    gen.add_argument("--s-star", dest="s_star", type=int, required=True)
    gen.add_argument("--r", type=float, required=True, help="flip ratio in [0,1)")
    gen.add_argument("--v", type=float, default=None, help="row correlation in (0,1)")
    gen.add_argument("--noise-sigma", dest="noise_sigma", type=float, default=0.1)
    gen.add_argument("--seed", type=int, required=True)
    gen.add_argument("--out", default=None, help="manifest path (default stdout)")
    gen.add_argument(
        "--dump-matrix", dest="dump_matrix", default=None,
        help="also export the measurement matrix (.txt = text, else raw "
        "row-major float64)",
    )

    def add_model_flags(p):
        p.add_argument("--s", type=int, default=None, help="signal budget (default s_star)")
        p.add_argument("--k", type=int, default=None, help="flip budget (default ceil(0.01 m))")
        p.add_argument("--eta", type=float, default=1e-4)
        p.add_argument("--epsilon", type=float, default=0.01)
        p.add_argument("--beta", type=float, default=0.5)
        p.add_argument("--rho", type=float, default=1e-6)
        p.add_argument("--tol", type=float, default=1e-4)
        p.add_argument("--max-iter", dest="max_iter", type=int, default=2000)
        p.add_argument("--step", type=float, default=None,
                       help="BIHT step (default 2/m)")
        p.add_argument("--biht-max-iter", dest="biht_max_iter", type=int, default=200)

    sol = sub.add_parser("solve", help="solve one manifest, print a CSV row")
    sol.add_argument("--manifest", required=True)
    sol.add_argument("--solver", required=True, help="gpsp | biht")
    add_model_flags(sol)
    sol.add_argument("--header", action="store_true", help="print the CSV header first")
    sol.add_argument("--dump-iterate", default=None, help="write the final iterate as JSON")

    swp = sub.add_parser("sweep", help="grid of instances x trials x solvers")
    swp.add_argument("--example", required=True, help="ind | cor")
    swp.add_argument("--n", type=_int_list, required=True)
    swp.add_argument("--m", type=_int_list, required=True)
    swp.add_argument("--s-star", dest="s_star", type=_int_list, required=True)
    swp.add_argument("--r", type=_float_list, required=True)
    swp.add_argument("--v", type=_float_list, default=[])
    swp.add_argument("--eta", type=_float_list, default=[1e-4])
    swp.add_argument("--epsilon", type=_float_list, default=[0.01])
    swp.add_argument("--k", type=_int_or_none_list, default=[None],
                     help="flip budgets; 'auto' = ceil(0.01 m)")
    swp.add_argument("--noise-sigma", dest="noise_sigma", type=float, default=0.1)
    swp.add_argument("--trials", type=int, default=200)
    swp.add_argument("--solvers", default="gpsp")
    swp.add_argument("--master-seed", dest="master_seed", type=int, default=1)
    swp.add_argument("--workers", type=int, default=None)
    swp.add_argument("--out", default=None, help="CSV path (default stdout)")
    swp.add_argument("--svg", action="store_true",
                     help="also write minimal SVG charts next to --out")
    swp.add_argument("--beta", type=float, default=0.5)
    swp.add_argument("--rho", type=float, default=1e-6)
    swp.add_argument("--tol", type=float, default=1e-4)
    swp.add_argument("--max-iter", dest="max_iter", type=int, default=2000)
    swp.add_argument("--step", type=float, default=None)
    swp.add_argument("--biht-max-iter", dest="biht_max_iter", type=int, default=200)

    cert = sub.add_parser("certify", help="optimality report for a saved iterate")
    cert.add_argument("--manifest", required=True)
    cert.add_argument("--iterate", required=True)
    cert.add_argument("--s", type=int, default=None)
    cert.add_argument("--k", type=int, default=None)
    cert.add_argument("--eta", type=float, default=None)
    cert.add_argument("--epsilon", type=float, default=None)
    cert.add_argument("--tol", type=float, default=1e-6)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "generate": _cmd_generate,
        "solve": _cmd_solve,
        "sweep": _cmd_sweep,
        "certify": _cmd_certify,
    }
    try:
        return handlers[args.command](args, parser)
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
