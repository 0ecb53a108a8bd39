"""Seeded synthetic instance generators.

Two measurement ensembles: i.i.d. standard Gaussian rows, and Gaussian rows
with AR(1) covariance Sigma_ij = v^|i-j|.  The ground-truth signal gets its
nonzero entries boosted away from zero by one unit of their own sign before
normalization; signs are then flipped on a uniformly chosen subset of
measurements after additive pre-quantization noise.

The draw order from the counter stream is fixed and documented below, so an
instance is reproducible bit-for-bit from (spec, seed) alone:

  1. matrix entries, row-major (Gaussian pairs)
  2. pre-quantization noise (m Gaussians, drawn even when sigma = 0)
  3. signal support (partial shuffle of range(n), s_star words)
  4. signal values (s_star Gaussians)
  5. flip positions (partial shuffle of range(m), ceil(r*m) words)
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.signal import lfilter

from .model import ProblemData
from .rng import CounterRng


def sgn(t):
    """Quantizer sign: +1 for positive, -1 otherwise (including zero)."""
    if math.isnan(t):
        raise ValueError("sgn undefined for NaN")
    return 1.0 if t > 0 else -1.0


def signum(t):
    """Three-valued sign: -1, 0 or +1."""
    if math.isnan(t):
        raise ValueError("signum undefined for NaN")
    return float(np.sign(t))


def sgn_vec(values):
    values = np.asarray(values, dtype=np.float64)
    if np.isnan(values).any():
        raise ValueError("sgn undefined for NaN")
    return np.where(values > 0, 1.0, -1.0)


def ceil_ratio(ratio, total):
    """ceil(ratio*total) guarded against float artifacts of the product."""
    return int(math.ceil(ratio * total - 1e-9)) if ratio * total > 0 else 0


@dataclass(frozen=True)
class GenSpec:
    """Instance recipe; ``v`` is None for the independent ensemble."""

    n: int
    m: int
    s_star: int
    r: float
    v: float | None = None
    noise_sigma: float = 0.1
    seed: int = 0

    def __post_init__(self):
        if self.n < 1 or self.m < 1:
            raise ValueError(f"need n, m >= 1, got n={self.n}, m={self.m}")
        if not 1 <= self.s_star <= self.n:
            raise ValueError(f"s_star={self.s_star} out of range [1, {self.n}]")
        if not 0 <= self.r < 1:
            raise ValueError(f"flip ratio r={self.r} out of range [0, 1)")
        if self.v is not None and not 0 < self.v < 1:
            raise ValueError(f"correlation v={self.v} out of range (0, 1)")
        if self.noise_sigma < 0:
            raise ValueError(f"noise_sigma must be non-negative, got {self.noise_sigma}")


@dataclass(frozen=True)
class GroundTruth:
    x_true: np.ndarray
    c_true: np.ndarray
    flip_mask: np.ndarray


def _instance(spec, correlated):
    rng = CounterRng(spec.seed)
    gauss = rng.gaussians(spec.m * spec.n).reshape(spec.m, spec.n)
    if correlated:
        # AR(1) recursion row_j = v*row_{j-1} + sqrt(1-v^2)*g_j is exactly the
        # lower-triangular Cholesky transform of Sigma_ij = v^|i-j|.
        scaled = gauss.copy()
        scaled[:, 1:] *= math.sqrt(1.0 - spec.v * spec.v)
        phi = lfilter([1.0], [1.0, -spec.v], scaled, axis=1)
    else:
        phi = gauss
    noise = rng.gaussians(spec.m)
    support = rng.choose_prefix(spec.n, spec.s_star)
    values = rng.gaussians(spec.s_star)
    values = values + np.sign(values)  # push nonzeros at least one away from 0
    x_true = np.zeros(spec.n)
    x_true[support] = values
    norm = float(np.linalg.norm(x_true))
    if norm == 0.0:
        raise ValueError("degenerate draw: ground-truth signal is zero")
    x_true /= norm
    flips = np.sort(rng.choose_prefix(spec.m, ceil_ratio(spec.r, spec.m)))
    clean = phi @ x_true
    c_true = sgn_vec(clean)
    h = np.ones(spec.m)
    h[flips] = -1.0
    c = h * sgn_vec(clean + spec.noise_sigma * noise)
    prob = ProblemData.from_phi_c(phi, c)
    return prob, GroundTruth(x_true=x_true, c_true=c_true, flip_mask=flips)


def gen_independent(spec):
    """Instance with i.i.d. standard Gaussian measurement rows."""
    if spec.v is not None:
        raise ValueError("independent ensemble takes v=None")
    return _instance(spec, correlated=False)


def gen_correlated(spec):
    """Instance with AR(1)-correlated Gaussian measurement rows."""
    if spec.v is None:
        raise ValueError("correlated ensemble requires v in (0, 1)")
    return _instance(spec, correlated=True)


def generate(spec):
    """Dispatch on spec.v."""
    return gen_correlated(spec) if spec.v is not None else gen_independent(spec)
