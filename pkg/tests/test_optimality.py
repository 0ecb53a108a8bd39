import math

import numpy as np
import pytest

from onebitcs import (
    Iterate,
    ModelParams,
    ProblemData,
    SolverConfig,
    certify_global,
    check_local_kkt,
    check_tau_stationary,
    error_bound_diagnostic,
    gpsp_solve,
    gradient,
    objective,
    tau_star,
    zero_solution_excluded,
)
from conftest import random_feasible_iterate, small_design


class TestLocalKkt:
    def test_closed_form_minimizer_passes(self):
        prob, params, zstar, _ = small_design(0.2)
        ok, violation = check_local_kkt(prob, params, zstar)
        assert ok
        assert violation < 1e-12

    def test_zero_point_fails_budget_count(self):
        prob, params, _, _ = small_design(0.2)
        ok, violation = check_local_kkt(
            prob, params, Iterate(x=np.zeros(4), y=np.zeros(3))
        )
        assert not ok
        assert math.isinf(violation)

    def test_perturbed_support_entry_fails(self):
        prob, params, zstar, _ = small_design(0.2)
        bumped = Iterate(x=zstar.x.copy(), y=zstar.y.copy())
        bumped.x[0] += 1e-2
        ok, violation = check_local_kkt(prob, params, bumped)
        assert not ok
        g = gradient(prob, params, bumped)
        assert violation == pytest.approx(abs(g.x[0]), rel=1e-9)

    def test_infeasible_rejected(self):
        prob, params, _, _ = small_design(0.2)
        with pytest.raises(ValueError):
            check_local_kkt(prob, params, Iterate(x=np.ones(4), y=np.zeros(3)))


class TestTauStationary:
    def test_holds_at_maximal_step(self):
        prob, params, zstar, _ = small_design(0.2)
        ts = tau_star(prob, params, zstar)
        ok, _ = check_tau_stationary(prob, params, zstar, ts)
        assert ok

    def test_fails_just_beyond_maximal_step(self):
        prob, params, zstar, _ = small_design(0.2)
        ts = tau_star(prob, params, zstar)
        ok, violation = check_tau_stationary(
            prob, params, zstar, ts * 1.001, tol=1e-9
        )
        assert not ok
        assert 0 < violation < 1e-2

    def test_zero_gradient_point_stationary_for_any_tau(self, rng):
        # x = 0 and y = eps*1 zero the residual; with k = m the count matches
        phi = rng.standard_normal((3, 4))
        prob = ProblemData.from_phi_c(phi, np.ones(3))
        params = ModelParams(epsilon=0.7, eta=0.4, s=2, k=3)
        z = Iterate(x=np.zeros(4), y=np.full(3, 0.7))
        for tau in [1e-6, 1.0, 1e6]:
            ok, violation = check_tau_stationary(prob, params, z, tau)
            assert ok and violation == 0.0

    def test_invalid_tau(self):
        prob, params, zstar, _ = small_design(0.2)
        with pytest.raises(ValueError):
            check_tau_stationary(prob, params, zstar, 0.0)


class TestTauStar:
    def test_closed_form_with_binding_y_term(self):
        # both ratios evaluate in closed form: (4+eta)/(2*eta) and 1/(eta*t)
        for t in [0.1, 0.2, 0.4]:
            prob, params, zstar, _ = small_design(t)
            want = min((4.0 + 1.0) / 2.0, 1.0 / t)
            assert tau_star(prob, params, zstar) == pytest.approx(want, rel=1e-12)

    def test_monotone_in_t(self):
        values = []
        for t in np.arange(0.05, 1.01, 0.05):
            prob, params, zstar, _ = small_design(float(t))
            values.append(tau_star(prob, params, zstar))
        assert all(a >= b - 1e-12 for a, b in zip(values, values[1:]))

    def test_slack_signal_budget_uses_only_y_ratio(self, rng):
        # x = 0, y = eps*1, k = m: gradient vanishes, signal budget is slack,
        # and the off-support row set is empty, so the ratio degenerates to
        # +infinity by the zero-infinity-norm convention
        phi = rng.standard_normal((3, 5))
        prob = ProblemData.from_phi_c(phi, np.ones(3))
        params = ModelParams(epsilon=0.7, eta=0.4, s=2, k=3)
        z = Iterate(x=np.zeros(5), y=np.full(3, 0.7))
        assert tau_star(prob, params, z) == math.inf

    def test_requires_kkt(self):
        prob, params, _, _ = small_design(0.2)
        with pytest.raises(ValueError):
            tau_star(prob, params, Iterate(x=np.zeros(4), y=np.zeros(3)))


class TestCertifyGlobal:
    def test_certified_region(self):
        for t in [0.05, 0.2, 0.4]:
            prob, params, zstar, _ = small_design(t)
            report = certify_global(prob, params, zstar)
            assert report.kkt_ok and report.certificate_available
            assert report.global_certified, f"t={t}"
            assert report.is_tau_stationary

    def test_not_certified_at_large_t(self):
        prob, params, zstar, _ = small_design(1.0)
        report = certify_global(prob, params, zstar)
        assert report.kkt_ok
        assert not report.global_certified
        assert report.tau_star == pytest.approx(1.0, rel=1e-12)

    def test_zero_design_flagged_degenerate(self):
        prob = ProblemData.from_phi_c(np.zeros((3, 2)), np.ones(3))
        params = ModelParams(epsilon=0.1, eta=0.5, s=1, k=1)
        z = Iterate(x=np.zeros(2), y=np.array([0.1, 0.0, 0.0]))
        report = certify_global(prob, params, z)
        assert report.zero_solution_excluded is False

    def test_report_serializes(self):
        prob, params, zstar, _ = small_design(0.2)
        report = certify_global(prob, params, zstar)
        data = report.to_dict()
        assert data["global_certified"] is True
        assert isinstance(data["tau_star"], float)

    def test_certified_point_never_beaten_from_random_starts(self, rng):
        prob, params, zstar, _ = small_design(0.2)
        report = certify_global(prob, params, zstar)
        assert report.global_certified
        f_star = objective(prob, params, zstar)
        for _ in range(50):
            z0 = random_feasible_iterate(rng, 4, 3, params.s, params.k)
            res = gpsp_solve(prob, params, SolverConfig(z0=z0))
            f_end = objective(
                prob, params, Iterate(x=res.x_raw, y=res.y_raw)
            )
            assert f_end >= f_star - 1e-8


class TestLemmaChain:
    def test_tau_stationary_implies_local_kkt(self, rng):
        # solver terminals at assorted small instances
        for trial in range(10):
            n, m = 8, 6
            phi = rng.standard_normal((m, n))
            c = np.where(rng.standard_normal(m) > 0, 1.0, -1.0)
            prob = ProblemData.from_phi_c(phi, c)
            params = ModelParams(epsilon=0.3, eta=0.05, s=2, k=2)
            res = gpsp_solve(prob, params, SolverConfig(tol=1e-10))
            z = Iterate(x=res.x_raw, y=res.y_raw)
            ok_tau, _ = check_tau_stationary(prob, params, z, 1e-3, tol=1e-6)
            if ok_tau:
                ok_kkt, _ = check_local_kkt(prob, params, z, tol=1e-6)
                assert ok_kkt


class TestErrorBound:
    def test_vanishing_inputs(self):
        diag = error_bound_diagnostic(100, 0, 0.0, 1e-12)
        assert diag.phi == pytest.approx(1e-12)
        assert diag.bound == pytest.approx(0.0, abs=1e-10)
        assert diag.within_validity

    def test_reference_arithmetic(self):
        diag = error_bound_diagnostic(250, 3, 0.1, 0.1)
        assert diag.phi == pytest.approx(0.012 + 0.025 + 0.1, rel=1e-12)
        assert diag.bound == pytest.approx(2.0 * math.sin(0.137 * math.pi), rel=1e-12)

    def test_boundary(self):
        diag = error_bound_diagnostic(10, 1, 0.0, 0.4)
        assert diag.phi == pytest.approx(0.5)
        assert diag.bound == pytest.approx(2.0)
        assert diag.within_validity

    def test_beyond_validity_flagged(self):
        diag = error_bound_diagnostic(10, 5, 1.0, 0.5)
        assert diag.phi > 0.5
        assert not diag.within_validity
        assert diag.bound == 2.0

    def test_eta_ceiling(self):
        diag = error_bound_diagnostic(26, 1, 0.0, 0.1, c_a=2.0)
        assert diag.eta_ceiling == pytest.approx(2.0 / 4.0)

    def test_validation(self):
        with pytest.raises(ValueError):
            error_bound_diagnostic(5, 5, 0.0, 0.1)
        with pytest.raises(ValueError):
            error_bound_diagnostic(5, 0, 0.0, 1.0)


class TestZeroExclusion:
    def test_zero_design_violates(self):
        prob = ProblemData.from_phi_c(np.zeros((3, 2)), np.ones(3))
        assert zero_solution_excluded(prob, 1) is False

    def test_generic_design_passes(self, rng):
        phi = rng.standard_normal((5, 3))
        prob = ProblemData.from_phi_c(phi, np.ones(5))
        assert zero_solution_excluded(prob, 1) is True

    def test_large_m_unchecked(self, rng):
        phi = rng.standard_normal((25, 2))
        prob = ProblemData.from_phi_c(phi, np.ones(25))
        assert zero_solution_excluded(prob, 1) is None
