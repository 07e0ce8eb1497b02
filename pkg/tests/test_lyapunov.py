import math

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings, strategies as st

from bsbs_entanglement.exceptions import DivergenceError, SolverError, UnstableSystemError
from bsbs_entanglement.lyapunov import (
    HORIZON_CAP,
    _rk4_step,
    default_horizon,
    evolve_covariance,
    lyapunov_residual,
    solve_steady_covariance,
)
from bsbs_entanglement.model import SystemParams, build_diffusion_matrix, build_drift_matrix

from oracles import FIG2, fig2_kw, random_stable_system

HALF_I = np.eye(6) / 2


@pytest.fixture
def fig2_system():
    p = SystemParams(**fig2_kw())
    return build_drift_matrix(p), build_diffusion_matrix(p)


class TestResidual:
    def test_exact(self):
        assert lyapunov_residual(-HALF_I, HALF_I, HALF_I) == 0

    def test_by_hand(self):
        assert lyapunov_residual(-HALF_I, HALF_I, np.eye(6)) == pytest.approx(1.0)


class TestSteadySolve:
    def test_vacuum(self):
        report = solve_steady_covariance(-HALF_I, HALF_I)
        np.testing.assert_allclose(report.covariance, HALF_I, atol=1e-15)
        assert report.residual_norm <= 1e-15
        assert not report.symmetrized

    def test_decoupled_thermal_mechanics(self):
        p = SystemParams(**fig2_kw(g_coupling_a=0.0, g_coupling_m=0.0))
        V = solve_steady_covariance(build_drift_matrix(p), build_diffusion_matrix(p)).covariance
        # damped thermal oscillator: n_th + 1/2 per quadrature
        np.testing.assert_allclose(V[4:, 4:], 100.5 * np.eye(2), rtol=1e-8, atol=1e-8)

    def test_fig2_residual(self, fig2_system):
        A, D = fig2_system
        report = solve_steady_covariance(A, D)
        assert report.residual_norm <= 1e-10
        assert lyapunov_residual(A, D, report.covariance) == pytest.approx(report.residual_norm)
        np.testing.assert_array_equal(report.covariance, report.covariance.T)

    def test_agrees_with_bartels_stewart(self, fig2_system):
        A, D = fig2_system
        ref = scipy.linalg.solve_continuous_lyapunov(A, -D)
        np.testing.assert_allclose(solve_steady_covariance(A, D).covariance, ref, rtol=1e-8, atol=1e-10)

    def test_fig2_matches_integrator(self, fig2_system):
        A, D = fig2_system
        V = solve_steady_covariance(A, D).covariance
        V0 = np.diag([0.5, 0.5, 0.5, 0.5, 100.5, 100.5])
        Vt = evolve_covariance(A, D, V0, t_end=2e5)
        np.testing.assert_allclose(Vt, V, rtol=0, atol=1e-6)

    def test_rejects_unstable(self):
        with pytest.raises(UnstableSystemError):
            solve_steady_covariance(np.diag([-1, -1, 0.1, -1, -1, -1.0]), HALF_I)

    def test_singular_system(self):
        A = np.diag([1.0, -1.0])  # lambda_1 + lambda_2 = 0
        with pytest.raises(SolverError):
            solve_steady_covariance(A, np.eye(2), check_stability=False)

    def test_tolerance_enforced(self, fig2_system):
        A, D = fig2_system
        with pytest.raises(SolverError):
            solve_steady_covariance(A, D, tol_residual=1e-30)

    @settings(max_examples=30, deadline=None)
    @given(st.integers(0, 2**32 - 1))
    def test_psd_and_symmetric(self, seed):
        A, D = random_stable_system(np.random.default_rng(seed))
        V = solve_steady_covariance(A, D).covariance
        np.testing.assert_array_equal(V, V.T)
        assert np.linalg.eigvalsh(V).min() >= -1e-10

    @settings(max_examples=30, deadline=None)
    @given(st.integers(0, 2**32 - 1), st.floats(0.01, 100))
    def test_linearity_and_scaling(self, seed, c):
        rng = np.random.default_rng(seed)
        A, D1 = random_stable_system(rng)
        D2 = np.diag(rng.uniform(0, 2, 6))
        V1 = solve_steady_covariance(A, D1).covariance
        V2 = solve_steady_covariance(A, D2).covariance
        V12 = solve_steady_covariance(A, D1 + D2).covariance
        np.testing.assert_allclose(V12, V1 + V2, rtol=1e-9, atol=1e-12)
        np.testing.assert_allclose(solve_steady_covariance(A, c * D1).covariance, c * V1, rtol=1e-9, atol=1e-12)


class TestEvolve:
    def test_fixed_point(self):
        np.testing.assert_allclose(evolve_covariance(-HALF_I, HALF_I, HALF_I, t_end=50), HALF_I, atol=1e-15)

    def test_scalar_relaxation(self):
        # v' = -v + 1/2, v(0) = 1  =>  v(10) = 1/2 + e^{-10}/2
        V = evolve_covariance(-HALF_I, HALF_I, np.eye(6), dt=0.01, t_end=10)
        np.testing.assert_allclose(np.diag(V), 0.500022699964881242, rtol=1e-12)
        np.testing.assert_allclose(V - np.diag(np.diag(V)), 0, atol=1e-15)

    def test_blocked_steps_equal_literal_loop(self):
        rng = np.random.default_rng(7)
        A, D = random_stable_system(rng)
        V0 = np.eye(6)
        V = V0.copy()
        for _ in range(137):
            V = _rk4_step(A, D, V, 0.01)
            V = (V + V.T) / 2
        np.testing.assert_allclose(evolve_covariance(A, D, V0, dt=0.01, t_end=1.37), V, rtol=1e-12, atol=1e-13)

    def test_divergence_reports_step(self):
        A = np.diag([2.0, -1.0])
        with pytest.raises(DivergenceError) as info:
            evolve_covariance(A, np.eye(2), np.eye(2), dt=0.01, t_end=1e5)
        assert 0 <= info.value.step < 10**7

    @pytest.mark.parametrize("dt, t_end", [(0.0, 1.0), (-0.1, 1.0), (0.1, 0.05)])
    def test_bad_times(self, dt, t_end):
        with pytest.raises(ValueError):
            evolve_covariance(-HALF_I, HALF_I, HALF_I, dt=dt, t_end=t_end)

    def test_default_horizon(self, fig2_system):
        A, _ = fig2_system
        assert default_horizon(A) == HORIZON_CAP  # gamma_m = 1e-4 puts 50/rate above the cap
        assert default_horizon(-HALF_I) == pytest.approx(100.0)  # slowest decay rate 0.5

    def test_random_systems_converge(self):
        rng = np.random.default_rng(2024)
        for _ in range(10):
            A, D = random_stable_system(rng)
            V = solve_steady_covariance(A, D).covariance
            Vt = evolve_covariance(A, D, HALF_I)
            assert np.max(np.abs(Vt - V)) <= 1e-6
            assert math.isfinite(Vt.sum())
