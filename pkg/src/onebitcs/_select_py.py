"""Numpy implementations of the deterministic selection kernels.

Both kernels order candidates by a strict total order so the selected set is
unique; the compiled lane in ``_kernels.pyx`` must return the exact same
indices for any input.  Keys: magnitude (resp. value) descending, then index
ascending.  Inputs are assumed finite.
"""

import numpy as np

BACKEND = "python"


def top_abs_indices(x, s):
    """Sorted indices of the s largest-magnitude entries (ties: lowest index)."""
    n = x.shape[0]
    if s >= n:
        return np.arange(n, dtype=np.int64)
    mag = np.abs(x)
    # threshold = (n-s)-th smallest magnitude; everything strictly above it
    # is selected, then the tie group is filled lowest-index-first.
    thresh = np.partition(mag, n - s)[n - s]
    chosen = np.flatnonzero(mag > thresh)
    need = s - chosen.size
    if need > 0:
        ties = np.flatnonzero(mag == thresh)[:need]
        chosen = np.concatenate([chosen, ties])
    return np.sort(chosen).astype(np.int64, copy=False)


def theta_indices(y, k):
    """Sorted indices of all negative entries plus the min(k, #positives)
    largest positive entries (ties: lowest index)."""
    neg = np.flatnonzero(y < 0)
    pos = np.flatnonzero(y > 0)
    take = min(k, pos.size)
    if take == 0:
        chosen = neg
    elif take == pos.size:
        chosen = np.concatenate([neg, pos])
    else:
        vals = y[pos]
        thresh = np.partition(vals, pos.size - take)[pos.size - take]
        big = pos[vals > thresh]
        need = take - big.size
        ties = pos[vals == thresh][:need]
        chosen = np.concatenate([neg, big, ties])
    return np.sort(chosen).astype(np.int64, copy=False)
