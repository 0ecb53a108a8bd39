"""Recovery-quality metrics: SNR in dB and normalized Hamming distances."""

import math

import numpy as np

from .datagen import sgn_vec

_UNIT_TOL = 1e-6


def _require_unit(vec, name):
    vec = np.asarray(vec, dtype=np.float64)
    norm = float(np.linalg.norm(vec))
    if abs(norm - 1.0) > _UNIT_TOL:
        raise ValueError(f"{name} must be unit-norm, got ||{name}|| = {norm}")
    return vec


def snr(x, x_true):
    """-20*log10 ||x - x_true|| for unit vectors; +inf on an exact match."""
    x = _require_unit(x, "x")
    x_true = _require_unit(x_true, "x_true")
    if x.shape != x_true.shape:
        raise ValueError("x and x_true must have the same length")
    dist = float(np.linalg.norm(x - x_true))
    if dist == 0.0:
        return math.inf
    return -20.0 * math.log10(dist)


def _sign_mismatch_fraction(prob, x, reference):
    x = np.asarray(x, dtype=np.float64)
    if x.shape[0] != prob.n:
        raise ValueError(f"x has length {x.shape[0]}, expected {prob.n}")
    reference = np.asarray(reference, dtype=np.float64)
    if reference.shape[0] != prob.m:
        raise ValueError(
            f"reference signs have length {reference.shape[0]}, expected {prob.m}"
        )
    predicted = sgn_vec(prob.phi @ x)
    return float(np.count_nonzero(predicted != reference)) / prob.m


def hamming_distance(prob, x):
    """Fraction of measurements whose predicted sign disagrees with c."""
    return _sign_mismatch_fraction(prob, x, prob.c)


def hamming_error(prob, x, c_true):
    """Fraction of predicted signs disagreeing with the clean signs."""
    return _sign_mismatch_fraction(prob, x, c_true)
