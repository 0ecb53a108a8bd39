"""Exact Euclidean projections onto the double-sparsity feasible set.

The signal block is projected onto ``{x : ||x||_0 <= s}`` by keeping the s
largest-magnitude entries; the auxiliary block onto
``{y : ||max(y,0)||_0 <= k}`` by keeping every negative entry and the k
largest positives.  Both projections are set-valued at ties; we fix the
lowest-index representative so runs are reproducible.

Selection kernels are dispatched at import: the compiled extension when the
build produced it, otherwise the numpy fallback with identical semantics.
"""

from dataclasses import dataclass

import numpy as np

try:
    from . import _kernels as _sel
except ImportError:  # extension not built; numpy lane
    from . import _select_py as _sel


def selection_backend():
    """Which selection lane is active: 'compiled' or 'python'."""
    return _sel.BACKEND


# Low-level kernel aliases for hot loops: no validation, finite input assumed.
top_abs_indices = _sel.top_abs_indices
theta_indices = _sel.theta_indices


@dataclass(frozen=True)
class IndexPartition:
    """Partition of [m] by the sign of y."""

    gamma_plus: np.ndarray
    gamma_zero: np.ndarray
    gamma_minus: np.ndarray


def index_partition(y):
    y = _as_vector(y, "y")
    return IndexPartition(
        gamma_plus=np.flatnonzero(y > 0),
        gamma_zero=np.flatnonzero(y == 0),
        gamma_minus=np.flatnonzero(y < 0),
    )


def _as_vector(v, name):
    v = np.asarray(v, dtype=np.float64)
    if v.ndim != 1:
        raise ValueError(f"{name} must be a 1-d vector, got shape {v.shape}")
    if not np.isfinite(v).all():
        raise ValueError(f"{name} contains non-finite entries")
    return np.ascontiguousarray(v)


def top_s_support(x, s):
    """Sorted indices of the s largest-magnitude entries of x.

    Ties are broken toward the lower index, so the result is the
    lexicographically smallest valid support.
    """
    x = _as_vector(x, "x")
    if not 1 <= s <= x.shape[0]:
        raise ValueError(f"s={s} out of range [1, {x.shape[0]}]")
    return _sel.top_abs_indices(x, int(s))


def project_s(x, s):
    """Closest point to x with at most s nonzeros."""
    x = _as_vector(x, "x")
    if not 1 <= s <= x.shape[0]:
        raise ValueError(f"s={s} out of range [1, {x.shape[0]}]")
    keep = _sel.top_abs_indices(x, int(s))
    out = np.zeros_like(x)
    out[keep] = x[keep]
    return out


def theta_support(y, k):
    """Sorted indices kept by the positive-part projection: every negative
    entry plus the min(k, #positives) largest positives (lowest index at
    ties)."""
    y = _as_vector(y, "y")
    if not 0 <= k <= y.shape[0]:
        raise ValueError(f"k={k} out of range [0, {y.shape[0]}]")
    return _sel.theta_indices(y, int(k))


def project_k(y, k):
    """Closest point to y with at most k positive entries.

    Entries with y_i <= 0 are never altered; excess positives are zeroed
    smallest-first.
    """
    y = _as_vector(y, "y")
    if not 0 <= k <= y.shape[0]:
        raise ValueError(f"k={k} out of range [0, {y.shape[0]}]")
    keep = _sel.theta_indices(y, int(k))
    out = np.zeros_like(y)
    out[keep] = y[keep]
    return out


def project_f(z, s, k):
    """Blockwise projection of an iterate onto the product feasible set."""
    from .model import Iterate

    return Iterate(x=project_s(z.x, s), y=project_k(z.y, k))
