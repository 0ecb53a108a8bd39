"""Problem data, model parameters and the quadratic objective.

The recovery problem minimizes

    f(x, y) = ||A x + y - epsilon*1||^2 + eta*||x||^2

over the double-sparsity set {||x||_0 <= s, ||max(y,0)||_0 <= k}, where
A = Diag(c) Phi couples the measurement matrix with the observed signs.
The half-Hessian H = [[A'A + eta*I, A'], [A, I]] is positive definite for
eta > 0; its extreme eigenvalues drive the optimality certificates and are
estimated here by power iteration on matrix-free H products.
"""

import warnings
from dataclasses import dataclass, field

import numpy as np

from .exceptions import UnsupportedSizeError

EIGEN_SIZE_CAP = 2000

_POWER_MAX_ITER = 500
_POWER_TOL = 1e-10


def _as_matrix(arr, name):
    arr = np.asarray(arr, dtype=np.float64)
    if arr.ndim != 2:
        raise ValueError(f"{name} must be 2-d, got shape {arr.shape}")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValueError(f"{name} must be non-empty, got shape {arr.shape}")
    if not np.isfinite(arr).all():
        raise ValueError(f"{name} contains non-finite entries")
    return np.ascontiguousarray(arr)


def _as_vector(vec, name, length=None):
    vec = np.asarray(vec, dtype=np.float64)
    if vec.ndim != 1:
        raise ValueError(f"{name} must be 1-d, got shape {vec.shape}")
    if length is not None and vec.shape[0] != length:
        raise ValueError(f"{name} has length {vec.shape[0]}, expected {length}")
    if not np.isfinite(vec).all():
        raise ValueError(f"{name} contains non-finite entries")
    return np.ascontiguousarray(vec)


@dataclass(frozen=True)
class ProblemData:
    """Measurement matrix ``phi``, sign vector ``c`` and ``a = Diag(c) phi``."""

    phi: np.ndarray
    c: np.ndarray
    a: np.ndarray

    @classmethod
    def from_phi_c(cls, phi, c):
        phi = _as_matrix(phi, "phi")
        c = _as_vector(c, "c", length=phi.shape[0])
        if not np.all(np.abs(c) == 1.0):
            raise ValueError("c entries must be +1 or -1")
        return cls(phi=phi, c=c, a=np.ascontiguousarray(c[:, None] * phi))

    @classmethod
    def from_signed_design(cls, a):
        """Wrap an already sign-scaled design matrix (c = all ones)."""
        a = _as_matrix(a, "a")
        return cls(phi=a, c=np.ones(a.shape[0]), a=a)

    @property
    def m(self):
        return self.a.shape[0]

    @property
    def n(self):
        return self.a.shape[1]


@dataclass(frozen=True)
class ModelParams:
    """Model constants: majorization offset, ridge weight and both budgets."""

    epsilon: float
    eta: float
    s: int
    k: int

    def __post_init__(self):
        if not (np.isfinite(self.epsilon) and self.epsilon > 0):
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")
        if not (np.isfinite(self.eta) and self.eta >= 0):
            raise ValueError(f"eta must be non-negative, got {self.eta}")
        if self.s < 1:
            raise ValueError(f"s must be at least 1, got {self.s}")
        if self.k < 0:
            raise ValueError(f"k must be non-negative, got {self.k}")

    def validate_against(self, prob):
        if self.s > prob.n:
            raise ValueError(f"s={self.s} exceeds n={prob.n}")
        if self.k > prob.m:
            raise ValueError(f"k={self.k} exceeds m={prob.m}")


def default_params(prob, s, epsilon=0.01, eta=1e-4, k=None):
    """Stock model constants; k defaults to 1% of the measurement count."""
    import math as _math

    if k is None:
        k = int(_math.ceil(0.01 * prob.m - 1e-9))
    params = ModelParams(epsilon=epsilon, eta=eta, s=s, k=k)
    params.validate_against(prob)
    return params


@dataclass(frozen=True)
class Iterate:
    """A point z = (x; y) of the joint variable space."""

    x: np.ndarray
    y: np.ndarray

    def stacked(self):
        return np.concatenate([self.x, self.y])

    @classmethod
    def zero(cls, n, m):
        return cls(x=np.zeros(n), y=np.zeros(m))

    @classmethod
    def from_stacked(cls, z, n):
        z = np.asarray(z, dtype=np.float64)
        return cls(x=z[:n].copy(), y=z[n:].copy())

    def is_feasible(self, s, k):
        return (
            int(np.count_nonzero(self.x)) <= s
            and int(np.count_nonzero(self.y > 0)) <= k
        )


@dataclass(frozen=True)
class EigenBounds:
    lambda_min: float
    lambda_max: float

    def __post_init__(self):
        if not 0 < self.lambda_min <= self.lambda_max:
            raise ValueError(
                f"need 0 < lambda_min <= lambda_max, got "
                f"({self.lambda_min}, {self.lambda_max})"
            )


def _check_dims(prob, z):
    if z.x.shape[0] != prob.n or z.y.shape[0] != prob.m:
        raise ValueError(
            f"iterate shape ({z.x.shape[0]}, {z.y.shape[0]}) does not match "
            f"problem ({prob.n}, {prob.m})"
        )


def residual(prob, params, z):
    """A x + y - epsilon*1, the shared building block of f and its gradient."""
    _check_dims(prob, z)
    return prob.a @ z.x + z.y - params.epsilon


def objective(prob, params, z):
    r = residual(prob, params, z)
    return float(r @ r + params.eta * (z.x @ z.x))


def gradient(prob, params, z):
    """Gradient of f, returned blockwise as an Iterate-shaped pair."""
    r = residual(prob, params, z)
    gx = 2.0 * (prob.a.T @ r) + 2.0 * params.eta * z.x
    gy = 2.0 * r
    return Iterate(x=gx, y=gy)


def hessian_h(prob, params):
    """Materialized half-Hessian [[A'A + eta*I, A'], [A, I]].

    Only intended for diagnostics; the solver never forms it.
    """
    if params.eta == 0:
        warnings.warn("eta = 0: half-Hessian may be singular", stacklevel=2)
    ata = prob.a.T @ prob.a
    ata[np.diag_indices_from(ata)] += params.eta
    return np.block(
        [[ata, prob.a.T], [prob.a, np.eye(prob.m)]]
    )


def hessian_apply(prob, params, x, y):
    """Matrix-free product H @ (x; y) returned as a stacked vector."""
    ax_y = prob.a @ x + y
    return np.concatenate([prob.a.T @ ax_y + params.eta * x, ax_y])


def _power_top_eigenvalue(apply_op, dim, seed_vec):
    """Largest eigenvalue of a PSD operator by power iteration.

    Converged means the Rayleigh quotient has stalled below the fixed
    tolerance *and* the eigen-residual is small; otherwise the caller falls
    back to a dense eigensolve.
    """
    v = seed_vec / np.linalg.norm(seed_vec)
    lam = 0.0
    for _ in range(_POWER_MAX_ITER):
        w = apply_op(v)
        norm_w = np.linalg.norm(w)
        if norm_w == 0.0:
            return 0.0, True  # operator annihilates v: eigenvalue 0
        v = w / norm_w
        w = apply_op(v)
        lam_new = float(v @ w)
        if abs(lam_new - lam) <= _POWER_TOL * max(1.0, abs(lam_new)):
            resid = np.linalg.norm(w - lam_new * v)
            return lam_new, resid <= 1e-8 * max(1.0, abs(lam_new))
        lam = lam_new
    return lam, False


def _deterministic_start(dim):
    # fixed pseudo-random direction; a constant vector risks being nearly
    # orthogonal to the top eigenspace for structured H
    from .rng import CounterRng

    return CounterRng(0x5EED).gaussians(dim)


def eigen_bounds(prob, params, size_cap=EIGEN_SIZE_CAP):
    """Extreme eigenvalues of the half-Hessian, for diagnostic sizes.

    Power iteration (shifted for the smallest eigenvalue) with a dense
    symmetric eigensolve as the non-convergence fallback.
    """
    if params.eta <= 0:
        raise ValueError("eigen_bounds requires eta > 0")
    dim = prob.n + prob.m
    if dim > size_cap:
        raise UnsupportedSizeError(
            f"n + m = {dim} exceeds the eigen-bounds cap {size_cap}"
        )
    n = prob.n

    def apply_h(v):
        return hessian_apply(prob, params, v[:n], v[n:])

    start = _deterministic_start(dim)
    lam_max, ok_max = _power_top_eigenvalue(apply_h, dim, start)
    lam_min, ok_min = 0.0, False
    if ok_max:

        def apply_shifted(v):
            return lam_max * v - apply_h(v)

        gap, ok_min = _power_top_eigenvalue(apply_shifted, dim, start)
        lam_min = lam_max - gap
    if not ok_max or not ok_min or lam_min <= 0:
        eigs = np.linalg.eigvalsh(hessian_h(prob, params))
        lam_min, lam_max = float(eigs[0]), float(eigs[-1])
    return EigenBounds(lambda_min=lam_min, lambda_max=lam_max)
