"""Compare the compiled selection kernels against the numpy fallback.

Two levels: kernel microbenchmarks (median call time over many repeats) and
an end-to-end solve with each lane patched into the solver modules.  The
lanes are interchangeable by construction (identical outputs), so the deltas
here are pure speed.

Run:  python benchmarks/kernel_bench.py
"""

import statistics
import time

import numpy as np

import onebitcs
from onebitcs import GenSpec, SolverConfig, default_params, gen_independent, gpsp_solve
from onebitcs import _select_py

try:
    from onebitcs import _kernels
except ImportError:
    _kernels = None


def time_call(fn, *args, repeats=200):
    samples = []
    for _ in range(repeats):
        start = time.perf_counter()
        fn(*args)
        samples.append(time.perf_counter() - start)
    return statistics.median(samples)


def kernel_table():
    rng = np.random.default_rng(0)
    print("kernel microbenchmarks (median us/call)")
    header = f"{'kernel':<22}{'n':>9}{'numpy':>12}{'compiled':>12}{'speedup':>9}"
    print(header)
    print("-" * len(header))
    for n in (1_000, 10_000, 100_000):
        x = rng.standard_normal(n)
        s = max(1, n // 100)
        k = max(1, n // 100)
        for name, args, py_fn, cy_fn in (
            ("top_abs_indices", (x, s), _select_py.top_abs_indices,
             None if _kernels is None else _kernels.top_abs_indices),
            ("theta_indices", (x, k), _select_py.theta_indices,
             None if _kernels is None else _kernels.theta_indices),
        ):
            t_py = time_call(py_fn, *args)
            if cy_fn is None:
                print(f"{name:<22}{n:>9}{t_py*1e6:>12.1f}{'n/a':>12}{'':>9}")
                continue
            out_py = py_fn(*args)
            out_cy = cy_fn(*args)
            assert np.array_equal(out_py, out_cy), "lanes disagree"
            t_cy = time_call(cy_fn, *args)
            print(
                f"{name:<22}{n:>9}{t_py*1e6:>12.1f}{t_cy*1e6:>12.1f}"
                f"{t_py/t_cy:>8.1f}x"
            )
    print()


def _set_lane(top_fn, theta_fn):
    for mod in (onebitcs.projections, onebitcs.gpsp, onebitcs.biht):
        mod.top_abs_indices = top_fn
        if hasattr(mod, "theta_indices"):
            mod.theta_indices = theta_fn


def solve_benchmark():
    spec = GenSpec(n=5000, m=2500, s_star=50, r=0.05, seed=1)
    prob, _ = gen_independent(spec)
    params = default_params(prob, s=50)
    cfg = SolverConfig(tol=1e-6)
    lanes = [("numpy", _select_py.top_abs_indices, _select_py.theta_indices)]
    if _kernels is not None:
        lanes.append(("compiled", _kernels.top_abs_indices, _kernels.theta_indices))
    print(f"end-to-end solve, n={spec.n} m={spec.m} s*={spec.s_star} (best of 3)")
    baseline = None
    for name, top_fn, theta_fn in lanes:
        _set_lane(top_fn, theta_fn)
        best = min(
            _timed_solve(prob, params, cfg) for _ in range(3)
        )
        note = "" if baseline is None else f"  ({baseline/best:.2f}x vs numpy)"
        if baseline is None:
            baseline = best
        print(f"  {name:<10}{best*1e3:10.1f} ms{note}")
    if _kernels is not None:
        _set_lane(_kernels.top_abs_indices, _kernels.theta_indices)


def _timed_solve(prob, params, cfg):
    start = time.perf_counter()
    gpsp_solve(prob, params, cfg)
    return time.perf_counter() - start


if __name__ == "__main__":
    print(f"active backend at import: {onebitcs.selection_backend()}")
    if _kernels is None:
        print("compiled kernels unavailable; showing numpy lane only")
    print()
    kernel_table()
    solve_benchmark()
