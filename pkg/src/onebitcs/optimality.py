"""Optimality certificates for the double-sparsity problem.

Three layers, all diagnostic:

* a first-order local test on the support/sign structure of the gradient,
* a fixed-point test of the projected gradient map at a given step,
* the closed-form maximal step at a local minimizer, whose comparison with
  1/(2*lambda_min) certifies global optimality.

The error-bound helper evaluates the deterministic part of the recovery
bound 2*sin(phi*pi) with phi = k/m + noise/4 + delta.
"""

import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from .model import EIGEN_SIZE_CAP, eigen_bounds, gradient


@dataclass(frozen=True)
class StationarityReport:
    """Outcome of the certificate stack at one point."""

    is_tau_stationary: bool
    tau_used: float
    max_violation: float
    kkt_ok: bool
    tau_star: float | None
    global_certified: bool
    lambda_min_used: float | None
    certificate_available: bool
    zero_solution_excluded: bool | None

    def to_dict(self):
        def enc(v):
            if isinstance(v, float) and not math.isfinite(v):
                return "inf" if v > 0 else "-inf"
            return v

        return {
            "is_tau_stationary": self.is_tau_stationary,
            "tau_used": enc(self.tau_used),
            "max_violation": enc(self.max_violation),
            "kkt_ok": self.kkt_ok,
            "tau_star": enc(self.tau_star),
            "global_certified": self.global_certified,
            "lambda_min_used": enc(self.lambda_min_used),
            "certificate_available": self.certificate_available,
            "zero_solution_excluded": self.zero_solution_excluded,
        }


@dataclass(frozen=True)
class ErrorBoundDiagnostic:
    phi: float
    bound: float
    eta_ceiling: float | None
    within_validity: bool


def _require_feasible(params, z):
    if int(np.count_nonzero(z.x)) > params.s:
        raise ValueError("iterate violates the signal sparsity budget")
    if int(np.count_nonzero(z.y > 0)) > params.k:
        raise ValueError("iterate violates the positive-entry budget")


def _kth_largest_positive(y, k):
    """k-th largest entry of max(y, 0); 0.0 when k == 0."""
    if k == 0:
        return 0.0
    pos = np.maximum(y, 0.0)
    if k >= pos.shape[0]:
        return float(np.min(pos))
    return float(np.partition(pos, pos.shape[0] - k)[pos.shape[0] - k])


def _kth_largest_abs(x, k):
    mag = np.abs(x)
    if k >= mag.shape[0]:
        return float(np.min(mag))
    return float(np.partition(mag, mag.shape[0] - k)[mag.shape[0] - k])


def check_local_kkt(prob, params, z, tol=1e-6):
    """First-order local-minimality test.

    Requires: gradient zero on the active signal support (everywhere when the
    budget is slack), gradient zero on supp(y), non-positive off supp(y), and
    exactly k positive entries of y (entries in [0, tol] count as zero).
    Returns (ok, max_violation); a budget-count mismatch reports an infinite
    violation since it is not a near-miss in gradient units.
    """
    _require_feasible(params, z)
    g = gradient(prob, params, z)
    t_set = np.flatnonzero(z.x)
    gamma = np.flatnonzero(z.y)
    violations = [0.0]
    if t_set.size < params.s:
        violations.append(float(np.max(np.abs(g.x), initial=0.0)))
    else:
        violations.append(float(np.max(np.abs(g.x[t_set]), initial=0.0)))
    violations.append(float(np.max(np.abs(g.y[gamma]), initial=0.0)))
    off = np.setdiff1d(np.arange(prob.m), gamma, assume_unique=True)
    violations.append(float(np.max(g.y[off], initial=0.0)))
    max_violation = max(violations)
    if int(np.count_nonzero(z.y > tol)) != params.k:
        return False, float("inf")
    return max_violation <= tol, max_violation


def check_tau_stationary(prob, params, z, tau, tol=1e-6):
    """Fixed-point test of the projected gradient map at step tau.

    Conditions (within tol, applied to the tau-scaled gradient): zero on both
    supports; off the signal support bounded by the s-th largest magnitude of
    x; off supp(y) within [-(k-th largest positive of y), 0]; and exactly k
    positive entries of y.
    """
    if not (np.isfinite(tau) and tau > 0):
        raise ValueError(f"tau must be positive, got {tau}")
    if int(np.count_nonzero(z.x)) > params.s:
        return False, float("inf")
    if int(np.count_nonzero(z.y > tol)) != params.k:
        return False, float("inf")
    g = gradient(prob, params, z)
    t_set = np.flatnonzero(z.x)
    t_off = np.setdiff1d(np.arange(prob.n), t_set, assume_unique=True)
    gamma = np.flatnonzero(z.y)
    g_off = np.setdiff1d(np.arange(prob.m), gamma, assume_unique=True)
    x_bound = _kth_largest_abs(z.x, params.s) if t_set.size == params.s else 0.0
    y_bound = _kth_largest_positive(z.y, params.k)
    violations = [
        float(np.max(np.abs(tau * g.x[t_set]), initial=0.0)),
        float(np.max(np.abs(tau * g.x[t_off]) - x_bound, initial=0.0)),
        float(np.max(np.abs(tau * g.y[gamma]), initial=0.0)),
        float(np.max(tau * g.y[g_off], initial=0.0)),
        float(np.max(-tau * g.y[g_off] - y_bound, initial=0.0)),
    ]
    max_violation = max(violations)
    return max_violation <= tol, max_violation


def _xi_star(prob, params, t_set, gamma_bar):
    """2*eps*eta*(B B' + eta I)^{-1} 1 with B the off-support rows of the
    active columns."""
    if gamma_bar.size == 0:
        return np.zeros(0)
    b = prob.a[np.ix_(gamma_bar, t_set)]
    mat = b @ b.T
    mat[np.diag_indices_from(mat)] += params.eta
    rhs = np.full(gamma_bar.size, 2.0 * params.epsilon * params.eta)
    return cho_solve(cho_factor(mat, lower=True), rhs)


def tau_star(prob, params, z, tol=1e-6):
    """Maximal step at which a local minimizer is a projected-gradient fixed
    point; may be +inf when the binding ratios vanish."""
    if params.eta <= 0:
        raise ValueError("tau_star requires eta > 0")
    ok, violation = check_local_kkt(prob, params, z, tol=tol)
    if not ok:
        raise ValueError(
            f"point fails the local first-order test (violation {violation})"
        )
    t_set = np.flatnonzero(z.x)
    gamma_bar = np.setdiff1d(np.arange(prob.m), np.flatnonzero(z.y), assume_unique=True)
    xi = _xi_star(prob, params, t_set, gamma_bar)
    xi_inf = float(np.max(np.abs(xi), initial=0.0))
    y_bound = _kth_largest_positive(z.y, params.k)
    value = y_bound / xi_inf if xi_inf > 0 else float("inf")
    if t_set.size == params.s:
        t_bar = np.setdiff1d(np.arange(prob.n), t_set, assume_unique=True)
        cross = prob.a[np.ix_(gamma_bar, t_bar)].T @ xi if t_bar.size else np.zeros(0)
        denom = float(np.max(np.abs(cross), initial=0.0))
        x_bound = _kth_largest_abs(z.x, params.s)
        second = x_bound / denom if denom > 0 else float("inf")
        value = min(value, second)
    return value


def zero_solution_excluded(prob, k, max_m=20):
    """Whether every (m-k)-row restriction of A has a nonzero column sum.

    Combinatorial; returns None (unchecked) above the size cap.
    """
    if prob.m > max_m:
        return None
    if k >= prob.m:
        return False  # the empty restriction always has zero column sums
    total = prob.a.sum(axis=0)
    for excluded in itertools.combinations(range(prob.m), k):
        drop = prob.a[list(excluded)].sum(axis=0)
        if np.max(np.abs(total - drop)) <= 0.0:
            return False
    return True


def certify_global(prob, params, z, tol=1e-6, size_cap=EIGEN_SIZE_CAP):
    """Run the full certificate stack and assemble a report.

    The global certificate compares the maximal stationarity step with
    1/(2*lambda_min); it is unavailable (not an error) when eta = 0 or the
    problem exceeds the eigenvalue-estimation size cap.
    """
    excluded = zero_solution_excluded(prob, params.k)
    kkt_ok, kkt_violation = check_local_kkt(prob, params, z, tol=tol)
    if not kkt_ok:
        return StationarityReport(
            is_tau_stationary=False,
            tau_used=float("nan"),
            max_violation=kkt_violation,
            kkt_ok=False,
            tau_star=None,
            global_certified=False,
            lambda_min_used=None,
            certificate_available=False,
            zero_solution_excluded=excluded,
        )
    ts = tau_star(prob, params, z, tol=tol)
    tau_used = ts if math.isfinite(ts) else 1.0
    stationary, violation = check_tau_stationary(prob, params, z, tau_used, tol=tol)
    lambda_min_used = None
    certified = False
    available = False
    if params.eta > 0 and prob.n + prob.m <= size_cap:
        bounds = eigen_bounds(prob, params, size_cap=size_cap)
        lambda_min_used = bounds.lambda_min
        available = True
        certified = ts >= 1.0 / (2.0 * bounds.lambda_min)
    return StationarityReport(
        is_tau_stationary=stationary,
        tau_used=tau_used,
        max_violation=violation,
        kkt_ok=True,
        tau_star=ts,
        global_certified=certified,
        lambda_min_used=lambda_min_used,
        certificate_available=available,
        zero_solution_excluded=excluded,
    )


def error_bound_diagnostic(m, k, rho_noise, delta, c_a=None):
    """Deterministic recovery-bound arithmetic.

    phi = k/m + rho_noise/4 + delta and bound = 2*sin(phi*pi).  For
    phi > 1/2 the theorem no longer applies; the bound is reported at its
    vacuous boundary value 2 (unit vectors are never further apart) and
    flagged.  The optional c_a yields the ridge-weight ceiling
    c_a / (sqrt(m-k) - 1).
    """
    if not m > k >= 0:
        raise ValueError(f"need m > k >= 0, got m={m}, k={k}")
    if not 0 < delta < 1:
        raise ValueError(f"delta must lie in (0, 1), got {delta}")
    if rho_noise < 0:
        raise ValueError(f"noise level must be non-negative, got {rho_noise}")
    phi = k / m + rho_noise / 4.0 + delta
    within = phi <= 0.5
    bound = 2.0 * math.sin(phi * math.pi) if within else 2.0
    ceiling = None
    if c_a is not None:
        root = math.sqrt(m - k)
        if root <= 1.0:
            raise ValueError("eta ceiling undefined for m - k <= 1")
        ceiling = c_a / (root - 1.0)
    return ErrorBoundDiagnostic(
        phi=phi, bound=bound, eta_ceiling=ceiling, within_validity=within
    )
