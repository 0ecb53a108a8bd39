"""Gradient projection with subspace pursuit.

Each iteration backtracks an Armijo step of the projected gradient map, then,
when the supports produced by that step agree with the current ones, solves
the quadratic exactly on the subspace those supports fix (a ridge least
squares on the rows where y is pinned to zero) and accepts the candidate
under the same sufficient-decrease test.  Matrix products exploit the s-sparse
signal block, so one iteration costs O(sigma*m*n + m*s^2 + s^3).
"""

import time
from collections import deque
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from .exceptions import LineSearchStallError, ZeroSignalError
from .model import Iterate
from .projections import theta_indices, top_abs_indices

_BACKTRACK_CAP = 60

# The stopping threshold is a length on the iterate space.  Iterates of this
# model scale exactly linearly with the offset epsilon, so the stock tolerance
# (calibrated at the stock offset 0.01) is scaled by epsilon/0.01; at the
# default offset this is the plain absolute rule.  Without the scaling, tiny
# offsets would stop after one iteration and huge ones would never stop early.
_REFERENCE_EPSILON = 0.01


@dataclass(frozen=True)
class SolverConfig:
    """Backtracking ratio, sufficient-decrease weight, stopping rule.

    ``debug_checks`` turns on per-iteration feasibility/descent assertions
    and full (unbounded) traces; production runs keep bounded ring buffers.
    """

    beta: float = 0.5
    rho: float = 1e-6
    tol: float = 1e-4
    max_iter: int = 2000
    z0: Iterate | None = None
    debug_checks: bool = False

    def __post_init__(self):
        if not 0 < self.beta < 1:
            raise ValueError(f"beta must lie in (0, 1), got {self.beta}")
        if not self.rho > 0:
            raise ValueError(f"rho must be positive, got {self.rho}")
        if not self.tol > 0:
            raise ValueError(f"tol must be positive, got {self.tol}")
        if self.max_iter < 1:
            raise ValueError(f"max_iter must be at least 1, got {self.max_iter}")


@dataclass
class SolverResult:
    x_bar: np.ndarray
    x_raw: np.ndarray
    y_raw: np.ndarray | None
    iterations: int
    objective_trace: list
    tol_trace: list
    termination: str  # tolerance_met | max_iter | stalled_supports
    subspace_steps_taken: int
    wall_time: float
    support_history: list = field(default_factory=list)
    debug: dict | None = None


def normalize_output(x):
    """x / ||x||; rejects the zero vector instead of inventing a direction."""
    norm = float(np.linalg.norm(x))
    if norm == 0.0:
        raise ZeroSignalError("cannot normalize an identically zero signal")
    return x / norm


def _sparse_objective(prob, params, x, t_idx, y):
    """f at an iterate whose signal support t_idx is known; O(m*s)."""
    if t_idx.size:
        r = prob.a[:, t_idx] @ x[t_idx] + y - params.epsilon
        ridge = params.eta * float(x[t_idx] @ x[t_idx])
    else:
        r = y - params.epsilon
        ridge = 0.0
    return float(r @ r) + ridge, r


def _project_step(x, y, gx, gy, tau, s, k):
    """One point of the projected gradient map at step tau."""
    xbar = x - tau * gx
    ybar = y - tau * gy
    t_sel = top_abs_indices(xbar, s)
    ux = np.zeros_like(x)
    ux[t_sel] = xbar[t_sel]
    g_sel = theta_indices(ybar, k)
    uy = np.zeros_like(y)
    uy[g_sel] = ybar[g_sel]
    return ux, uy, t_sel


def _armijo(prob, params, x, y, gx, gy, fz, cfg):
    """Smallest backtracking exponent meeting the sufficient decrease."""
    tau = 1.0
    for sigma in range(_BACKTRACK_CAP + 1):
        if sigma:
            tau *= cfg.beta
        ux, uy, t_sel = _project_step(x, y, gx, gy, tau, params.s, params.k)
        fu, _ = _sparse_objective(prob, params, ux, t_sel, uy)
        dx = ux - x
        dy = uy - y
        dist2 = float(dx @ dx) + float(dy @ dy)
        if fu <= fz - cfg.rho * dist2:
            return tau, sigma, ux, uy, t_sel, fu, dist2
    raise LineSearchStallError(
        f"no sufficient decrease within {_BACKTRACK_CAP} halvings"
    )


def armijo_step(prob, params, z, cfg=None):
    """Public Armijo rule: returns (tau, u, sigma) for a feasible iterate."""
    from .model import gradient, objective

    cfg = cfg if cfg is not None else SolverConfig()
    if not z.is_feasible(params.s, params.k):
        raise ValueError("iterate is not feasible")
    g = gradient(prob, params, z)
    fz = objective(prob, params, z)
    tau, sigma, ux, uy, _, _, _ = _armijo(prob, params, z.x, z.y, g.x, g.y, fz, cfg)
    return tau, Iterate(x=ux, y=uy), sigma


def subspace_trigger(z, u, grad_x_at_u, tol):
    """Support-stability test gating the subspace step.

    True when the positive sets of y agree and either the signal supports
    agree or the signal gradient at u is already below tol.
    """
    if not np.array_equal(np.flatnonzero(z.y > 0), np.flatnonzero(u.y > 0)):
        return False
    if np.array_equal(np.flatnonzero(z.x), np.flatnonzero(u.x)):
        return True
    return float(np.linalg.norm(grad_x_at_u)) <= tol


def subspace_solve(prob, params, t_set, gamma_zero, gamma_minus):
    """Exact minimizer of f on the subspace fixed by the given sets.

    Zeroing y on gamma_zero reduces the problem to a ridge least squares on
    those rows; the remaining y entries absorb their residuals exactly.
    Returns (v, feasible) where feasible means v respects the sign
    constraint on gamma_minus.  Raises numpy.linalg.LinAlgError when the
    normal equations are singular (possible only for eta = 0).
    """
    t_set = np.asarray(t_set, dtype=np.int64)
    gamma_zero = np.asarray(gamma_zero, dtype=np.int64)
    gamma_minus = np.asarray(gamma_minus, dtype=np.int64)
    m, n = prob.m, prob.n
    free_rows = np.ones(m, dtype=bool)
    free_rows[gamma_zero] = False
    x = np.zeros(n)
    y = np.zeros(m)
    if t_set.size:
        b0 = prob.a[np.ix_(gamma_zero, t_set)]
        gram = b0.T @ b0
        gram[np.diag_indices_from(gram)] += params.eta
        rhs = params.epsilon * b0.sum(axis=0)
        try:
            xt = cho_solve(cho_factor(gram, lower=True), rhs)
        except ValueError as exc:  # scipy reports some non-PD cases as ValueError
            raise np.linalg.LinAlgError(str(exc)) from exc
        x[t_set] = xt
        free_idx = np.flatnonzero(free_rows)
        y[free_idx] = params.epsilon - prob.a[np.ix_(free_idx, t_set)] @ xt
    else:
        y[free_rows] = params.epsilon
    feasible = bool(np.all(y[gamma_minus] <= 0.0))
    return Iterate(x=x, y=y), feasible


def _support_signature(x, y):
    return (
        tuple(np.flatnonzero(x)),
        tuple(np.flatnonzero(y > 0)),
        tuple(np.flatnonzero(y == 0)),
        tuple(np.flatnonzero(y < 0)),
    )


def gpsp_solve(prob, params, cfg=None):
    """Run the solver to its stopping rule and normalize the output.

    Raises ZeroSignalError if the final signal block is identically zero
    (the normalized output would be undefined).
    """
    cfg = cfg if cfg is not None else SolverConfig()
    params.validate_against(prob)
    start = time.perf_counter()
    n, m = prob.n, prob.m
    if cfg.z0 is None:
        x = np.zeros(n)
        y = np.zeros(m)
    else:
        if cfg.z0.x.shape[0] != n or cfg.z0.y.shape[0] != m:
            raise ValueError("z0 dimensions do not match the problem")
        if not cfg.z0.is_feasible(params.s, params.k):
            raise ValueError("z0 is not feasible")
        x = cfg.z0.x.astype(np.float64).copy()
        y = cfg.z0.y.astype(np.float64).copy()

    t_idx = np.flatnonzero(x)
    fz, _ = _sparse_objective(prob, params, x, t_idx, y)

    obj_trace = deque(maxlen=None if cfg.debug_checks else 64)
    tol_trace = deque(maxlen=None if cfg.debug_checks else 64)
    supports = deque(maxlen=5)
    debug = (
        {
            "tau": [],
            "sigma": [],
            "objective": [fz],
            "step_norm": [],
            "subspace_skipped_singular": 0,
        }
        if cfg.debug_checks
        else None
    )

    termination = "max_iter"
    subspace_steps = 0
    iterations = 0
    eta2 = 2.0 * params.eta
    stop_tol = cfg.tol * (params.epsilon / _REFERENCE_EPSILON)

    for _ in range(cfg.max_iter):
        iterations += 1
        # gradient at the current iterate (the only O(m*n) product per trial-free iteration)
        if t_idx.size:
            r = prob.a[:, t_idx] @ x[t_idx] + y - params.epsilon
        else:
            r = y - params.epsilon
        gx = 2.0 * (r @ prob.a)
        if params.eta != 0.0:
            gx += eta2 * x
        gy = 2.0 * r

        tau, sigma, ux, uy, _, fu, dist2 = _armijo(
            prob, params, x, y, gx, gy, fz, cfg
        )
        tol_l = float(np.sqrt(dist2))

        next_x, next_y, next_f = ux, uy, fu
        gamma_plus = np.flatnonzero(y > 0)
        if np.array_equal(gamma_plus, np.flatnonzero(uy > 0)):
            t_u = np.flatnonzero(ux)
            trig = np.array_equal(t_idx, t_u)
            if not trig:
                _, ru = _sparse_objective(prob, params, ux, t_u, uy)
                gxu = 2.0 * (ru @ prob.a)
                if params.eta != 0.0:
                    gxu += eta2 * ux
                trig = float(np.linalg.norm(gxu)) <= stop_tol
            if trig:
                try:
                    v, feasible = subspace_solve(
                        prob,
                        params,
                        t_idx,
                        np.flatnonzero(y == 0),
                        np.flatnonzero(y < 0),
                    )
                except np.linalg.LinAlgError:
                    v, feasible = None, False
                    if debug is not None:
                        debug["subspace_skipped_singular"] += 1
                if feasible:
                    fv, _ = _sparse_objective(prob, params, v.x, t_idx, v.y)
                    dvx = v.x - ux
                    dvy = v.y - uy
                    dvu2 = float(dvx @ dvx) + float(dvy @ dvy)
                    if fv <= fu - cfg.rho * dvu2:
                        next_x, next_y, next_f = v.x, v.y, fv
                        subspace_steps += 1

        if cfg.debug_checks:
            assert int(np.count_nonzero(next_x)) <= params.s
            assert int(np.count_nonzero(next_y > 0)) <= params.k
            step2 = float((next_x - x) @ (next_x - x)) + float(
                (next_y - y) @ (next_y - y)
            )
            assert next_f <= fz - 0.5 * cfg.rho * step2 + 1e-10
            debug["tau"].append(tau)
            debug["sigma"].append(sigma)
            debug["objective"].append(next_f)
            debug["step_norm"].append(float(np.sqrt(step2)))

        stalled = (
            tol_l > stop_tol
            and np.array_equal(next_x, x)
            and np.array_equal(next_y, y)
        )
        x, y, fz = next_x, next_y, next_f
        t_idx = np.flatnonzero(x)
        obj_trace.append(fz)
        tol_trace.append(tol_l)
        supports.append(_support_signature(x, y))

        if tol_l <= stop_tol:
            termination = "tolerance_met"
            break
        if stalled:
            termination = "stalled_supports"
            break

    wall = time.perf_counter() - start
    x_bar = normalize_output(x)
    return SolverResult(
        x_bar=x_bar,
        x_raw=x,
        y_raw=y,
        iterations=iterations,
        objective_trace=list(obj_trace),
        tol_trace=list(tol_trace),
        termination=termination,
        subspace_steps_taken=subspace_steps,
        wall_time=wall,
        support_history=list(supports),
        debug=debug,
    )
