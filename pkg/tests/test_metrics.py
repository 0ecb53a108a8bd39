import math

import numpy as np
import pytest

from onebitcs import GenSpec, gen_independent, hamming_distance, hamming_error, snr
from onebitcs.datagen import sgn_vec


class TestSnr:
    def test_distance_point_one_gives_twenty_db(self):
        # chord of length 0.1 between unit vectors: angle 2*asin(0.05)
        theta = 2.0 * math.asin(0.05)
        x = np.array([1.0, 0.0])
        y = np.array([math.cos(theta), math.sin(theta)])
        assert snr(y, x) == pytest.approx(20.0, rel=1e-9)

    def test_exact_match_is_infinite(self):
        x = np.array([0.6, 0.8])
        assert snr(x, x) == math.inf

    def test_unit_distance_is_zero_db(self):
        x = np.array([1.0, 0.0])
        y = np.array([0.5, math.sqrt(3.0) / 2.0])
        assert snr(x, y) == pytest.approx(0.0, abs=1e-12)

    def test_monotone_in_distance(self):
        base = np.array([1.0, 0.0])
        angles = [0.1, 0.2, 0.4, 0.8]
        values = [
            snr(np.array([math.cos(a), math.sin(a)]), base) for a in angles
        ]
        assert all(a > b for a, b in zip(values, values[1:]))

    def test_non_unit_rejected(self):
        with pytest.raises(ValueError):
            snr(np.array([2.0, 0.0]), np.array([1.0, 0.0]))
        with pytest.raises(ValueError):
            snr(np.array([1.0, 0.0]), np.array([0.0, 0.0]))


class TestHamming:
    def test_zero_when_signs_match(self):
        spec = GenSpec(n=20, m=15, s_star=2, r=0.0, noise_sigma=0.0, seed=2)
        prob, truth = gen_independent(spec)
        assert hamming_distance(prob, truth.x_true) == 0.0
        assert hamming_error(prob, truth.x_true, truth.c_true) == 0.0

    def test_all_disagree(self):
        spec = GenSpec(n=20, m=15, s_star=2, r=0.0, noise_sigma=0.0, seed=2)
        prob, truth = gen_independent(spec)
        assert hamming_distance(prob, -truth.x_true) == 1.0

    def test_flip_count_over_m_when_noiseless(self):
        spec = GenSpec(n=20, m=16, s_star=2, r=0.25, noise_sigma=0.0, seed=3)
        prob, truth = gen_independent(spec)
        want = truth.flip_mask.size / prob.m
        assert hamming_distance(prob, truth.x_true) == pytest.approx(want)
        assert hamming_error(prob, truth.x_true, truth.c_true) == 0.0

    def test_matches_elementwise_loop(self, rng):
        spec = GenSpec(n=10, m=12, s_star=2, r=0.2, seed=6)
        prob, truth = gen_independent(spec)
        for _ in range(10):
            x = rng.standard_normal(10)
            predicted = sgn_vec(prob.phi @ x)
            count = sum(
                1 for i in range(prob.m) if predicted[i] != prob.c[i]
            )
            assert hamming_distance(prob, x) == pytest.approx(count / prob.m)

    def test_values_in_unit_interval(self, rng):
        spec = GenSpec(n=10, m=12, s_star=2, r=0.2, seed=6)
        prob, truth = gen_independent(spec)
        for _ in range(20):
            x = rng.standard_normal(10)
            assert 0.0 <= hamming_distance(prob, x) <= 1.0
            assert 0.0 <= hamming_error(prob, x, truth.c_true) <= 1.0

    def test_dimension_mismatch(self):
        spec = GenSpec(n=10, m=12, s_star=2, r=0.2, seed=6)
        prob, _ = gen_independent(spec)
        with pytest.raises(ValueError):
            hamming_distance(prob, np.zeros(11))
