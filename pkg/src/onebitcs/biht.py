"""Binary iterative hard thresholding baseline.

One-sided update x <- P_s(x + (step/2) * A'(1 - sgn(Ax))) from the zero
start; the default step 2/m scales the accumulated sign mismatches to the
iterate magnitude, and only the final output is normalized.  (Per-iteration
renormalization with a unit step was tried first and collapses the iteration
into a memoryless re-estimate; see the benchmark suite.)  No descent
guarantee is claimed; the iteration stops on a stable support-and-sign
pattern or at the iteration cap.
"""

import time

import numpy as np

from .gpsp import SolverResult, normalize_output
from .projections import top_abs_indices


def biht_solve(prob, s, step=None, max_iter=200):
    """Run BIHT; output is s-sparse and unit-norm.

    Raises ZeroSignalError when the final iterate is zero (e.g. step = 0).
    """
    if not 1 <= s <= prob.n:
        raise ValueError(f"s={s} out of range [1, {prob.n}]")
    if step is None:
        step = 2.0 / prob.m
    if step < 0:
        raise ValueError(f"step must be non-negative, got {step}")
    if max_iter < 1:
        raise ValueError(f"max_iter must be at least 1, got {max_iter}")
    start = time.perf_counter()
    n = prob.n
    x = np.zeros(n)
    t_idx = np.flatnonzero(x)
    prev_signs = None
    prev_support = None
    termination = "max_iter"
    iterations = 0
    for _ in range(max_iter):
        iterations += 1
        ax = prob.a[:, t_idx] @ x[t_idx] if t_idx.size else np.zeros(prob.m)
        signs = np.where(ax > 0, 1.0, -1.0)
        grad = (1.0 - signs) @ prob.a
        moved = x + 0.5 * step * grad
        keep = top_abs_indices(moved, s)
        x = np.zeros(n)
        x[keep] = moved[keep]
        t_idx = np.flatnonzero(x)
        support = tuple(t_idx)
        if prev_support == support and prev_signs is not None and np.array_equal(
            prev_signs, signs
        ):
            termination = "stalled_supports"
            break
        prev_support = support
        prev_signs = signs
    wall = time.perf_counter() - start
    x_bar = normalize_output(x)
    return SolverResult(
        x_bar=x_bar,
        x_raw=x,
        y_raw=None,
        iterations=iterations,
        objective_trace=[],
        tol_trace=[],
        termination=termination,
        subspace_steps_taken=0,
        wall_time=wall,
    )
