import numpy as np
import pytest

from onebitcs import GenSpec, ZeroSignalError, biht_solve, gen_independent, snr


def test_easy_one_sparse_recovery():
    spec = GenSpec(n=50, m=400, s_star=1, r=0.0, noise_sigma=0.0, seed=5)
    prob, truth = gen_independent(spec)
    res = biht_solve(prob, s=1)
    assert np.flatnonzero(res.x_bar).tolist() == np.flatnonzero(truth.x_true).tolist()
    assert snr(res.x_bar, truth.x_true) > 10


def test_zero_step_yields_zero_signal_error():
    spec = GenSpec(n=20, m=10, s_star=2, r=0.0, seed=1)
    prob, _ = gen_independent(spec)
    with pytest.raises(ZeroSignalError):
        biht_solve(prob, s=2, step=0.0)


def test_output_always_sparse_and_unit(rng):
    for seed in range(5):
        spec = GenSpec(n=60, m=40, s_star=4, r=0.1, seed=seed)
        prob, _ = gen_independent(spec)
        res = biht_solve(prob, s=4)
        assert int(np.count_nonzero(res.x_bar)) <= 4
        assert np.linalg.norm(res.x_bar) == pytest.approx(1.0, abs=1e-12)
        assert res.iterations <= 200


def test_parameter_validation():
    spec = GenSpec(n=20, m=10, s_star=2, r=0.0, seed=1)
    prob, _ = gen_independent(spec)
    with pytest.raises(ValueError):
        biht_solve(prob, s=0)
    with pytest.raises(ValueError):
        biht_solve(prob, s=2, step=-1.0)
    with pytest.raises(ValueError):
        biht_solve(prob, s=2, max_iter=0)
