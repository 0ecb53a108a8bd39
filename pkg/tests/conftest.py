import numpy as np
import pytest

from onebitcs import Iterate, ModelParams, ProblemData


def small_design(t, eta=1.0, eps=0.3):
    """A 3x4 design with a known closed-form local minimizer.

    Returns (prob, params, zstar, c) where zstar = ((c,0,0,0); (c+eps,0,0))
    with c = 2*eps/(2+eta) satisfies the first-order conditions for s=k=1.
    """
    a = np.array(
        [
            [-1.0, t, t, 0.0],
            [1.0, t, 0.0, 0.0],
            [1.0, 0.0, t, t],
        ]
    )
    prob = ProblemData.from_signed_design(a)
    params = ModelParams(epsilon=eps, eta=eta, s=1, k=1)
    c = 2.0 * eps / (2.0 + eta)
    zstar = Iterate(x=np.array([c, 0.0, 0.0, 0.0]), y=np.array([c + eps, 0.0, 0.0]))
    return prob, params, zstar, c


def random_problem(rng, n, m):
    phi = rng.standard_normal((m, n))
    c = np.where(rng.standard_normal(m) > 0, 1.0, -1.0)
    return ProblemData.from_phi_c(phi, c)


def random_feasible_iterate(rng, n, m, s, k):
    x = np.zeros(n)
    support = rng.choice(n, size=rng.integers(0, s + 1), replace=False)
    x[support] = rng.standard_normal(support.size)
    y = rng.standard_normal(m)
    pos = np.flatnonzero(y > 0)
    if pos.size > k:
        drop = rng.choice(pos, size=pos.size - k, replace=False)
        y[drop] = -np.abs(y[drop])
    return Iterate(x=x, y=y)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
