"""McLachlan system assembly, regularized solve, and imaginary-time stepping."""

import numpy as np
import pytest

from conftest import random_hermitian
from ssqite.errors import MaxStepsExceeded
from ssqite.pauli_algebra import PauliSum, decompose_dense
from ssqite.qite_engine import (
    McLachlanSystem,
    QiteConfig,
    assemble,
    run_qite,
    solve,
    step,
)
from ssqite.simulator import Circuit, Gate, Statevector, apply, build_twolocal, expectation


def single_ry():
    return Circuit(n=1, gates=(Gate("RY", (0,), 0),), num_params=1)


Z = PauliSum.from_terms([(1.0, "Z")])


class TestAssemble:
    def test_single_ry_closed_form(self):
        sys = assemble(single_ry(), [np.pi / 2], Z, Statevector.zero(1))
        assert sys.a[0, 0] == pytest.approx(0.25, abs=1e-12)
        assert sys.c[0] == pytest.approx(0.5, abs=1e-12)
        assert sys.energy == pytest.approx(0.0, abs=1e-12)

    def test_gram_matrix_symmetric_psd(self, rng):
        c = build_twolocal()
        h = decompose_dense(random_hermitian(rng, 4))
        for _ in range(5):
            sys = assemble(c, rng.uniform(-np.pi, np.pi, 16), h, Statevector.zero(2))
            assert np.max(np.abs(sys.a - sys.a.T)) < 1e-10
            assert np.linalg.eigvalsh(sys.a).min() > -1e-9

    def test_c_is_half_negative_gradient(self, rng):
        # C_i == -1/2 dE/dtheta_i, checked by central differences.
        c = build_twolocal()
        s0 = Statevector.zero(2)
        for _ in range(20):
            h = decompose_dense(random_hermitian(rng, 4))
            theta = rng.uniform(-np.pi, np.pi, 16)
            sys = assemble(c, theta, h, s0)
            eps = 1e-6
            for i in rng.choice(16, size=4, replace=False):
                tp, tm = theta.copy(), theta.copy()
                tp[i] += eps
                tm[i] -= eps
                grad = (
                    expectation(h, apply(c, tp, s0)) - expectation(h, apply(c, tm, s0))
                ) / (2 * eps)
                assert sys.c[i] == pytest.approx(-0.5 * grad, abs=1e-8)

    def test_phase_correction_zeroes_pure_phase(self):
        # RZ on |0> only changes the global phase; the corrected metric must
        # vanish while the plain one sees the phase velocity.
        rz = Circuit(n=1, gates=(Gate("RZ", (0,), 0),), num_params=1)
        plain = assemble(rz, [0.3], Z, Statevector.zero(1))
        corrected = assemble(rz, [0.3], Z, Statevector.zero(1), phase_correction=True)
        assert plain.a[0, 0] == pytest.approx(0.25, abs=1e-12)
        assert corrected.a[0, 0] == pytest.approx(0.0, abs=1e-12)

    def test_energy_shift_leaves_velocity_unchanged(self, rng):
        # Subtracting E*I from H shifts nothing for a unitary ansatz: the
        # velocity direction is identical because Re<d_i phi|phi> vanishes.
        c = build_twolocal()
        theta = rng.uniform(-np.pi, np.pi, 16)
        s0 = Statevector.zero(2)
        h = decompose_dense(random_hermitian(rng, 4))
        plain = assemble(c, theta, h, s0)
        shifted_terms = list(h.terms) + [(-plain.energy, "I" * 2)]
        h_shifted = PauliSum.from_terms(shifted_terms)
        shifted = assemble(c, theta, h_shifted, s0)
        np.testing.assert_allclose(shifted.c, plain.c, atol=1e-12)
        np.testing.assert_allclose(shifted.a, plain.a, atol=1e-12)
        assert shifted.energy == pytest.approx(0.0, abs=1e-10)
        for corr in (False, True):
            a0 = assemble(c, theta, h, s0, phase_correction=corr)
            a1 = assemble(c, theta, h_shifted, s0, phase_correction=corr)
            np.testing.assert_allclose(
                solve(a1, 1e-6), solve(a0, 1e-6), atol=1e-10
            )

    def test_phase_correction_identity(self, rng):
        # A_corrected == A - g g^T with g_i = Im<phi|d_i phi>.
        from ssqite.simulator import derivative_stack

        c = build_twolocal()
        theta = rng.uniform(-np.pi, np.pi, 16)
        h = decompose_dense(random_hermitian(rng, 4))
        plain = assemble(c, theta, h, Statevector.zero(2))
        corrected = assemble(c, theta, h, Statevector.zero(2), phase_correction=True)
        phi, stack = derivative_stack(c, theta, Statevector.zero(2))
        g = np.imag(phi.amps.conj() @ stack.T)
        np.testing.assert_allclose(corrected.a, plain.a - np.outer(g, g), atol=1e-12)


class TestConfig:
    def test_validation(self):
        with pytest.raises(ValueError):
            QiteConfig(dtau=0.0)
        with pytest.raises(ValueError):
            QiteConfig(max_steps=0)
        with pytest.raises(ValueError):
            QiteConfig(regularization=-1.0)
        with pytest.raises(ValueError):
            QiteConfig(integrator="leapfrog")


class TestSolve:
    def test_scalar_division(self):
        sys = McLachlanSystem(a=np.array([[0.25]]), c=np.array([0.5]), energy=0.0)
        assert solve(sys, 0.0)[0] == pytest.approx(2.0, abs=1e-12)

    def test_stationary_zero_system(self):
        sys = McLachlanSystem(a=np.zeros((1, 1)), c=np.zeros(1), energy=0.0)
        assert solve(sys, 1e-6)[0] == pytest.approx(0.0)

    def test_spd_residual(self, rng):
        for _ in range(5):
            m = rng.normal(size=(8, 8))
            a = m @ m.T + 0.5 * np.eye(8)
            cvec = rng.normal(size=8)
            sys = McLachlanSystem(a=a, c=cvec, energy=0.0)
            x = solve(sys, 0.0)
            assert np.linalg.norm(a @ x - cvec) < 1e-9

    def test_singular_truncated(self):
        # Rank-1 A with C in range: pseudo-solve recovers the range component.
        a = np.array([[1.0, 0.0], [0.0, 0.0]])
        sys = McLachlanSystem(a=a, c=np.array([2.0, 0.0]), energy=0.0)
        x = solve(sys, 0.0)
        np.testing.assert_allclose(x, [2.0, 0.0], atol=1e-10)


class TestStep:
    def test_euler_closed_form(self):
        cfg = QiteConfig(dtau=0.1, integrator="euler", regularization=0.0)
        new = step(single_ry(), [np.pi / 2], Z, Statevector.zero(1), cfg)
        assert new[0] == pytest.approx(np.pi / 2 + 0.2, abs=1e-12)

    def test_rk4_matches_fine_reference(self):
        # The single-RY flow reduces to d theta / d tau = 2 sin(theta); compare
        # one rk4 step of the full machinery to a dense-step reference
        # integration of the scalar ODE.
        def reference(theta0, dtau, substeps=10000):
            h = dtau / substeps
            th = theta0
            for _ in range(substeps):
                k1 = 2 * np.sin(th)
                k2 = 2 * np.sin(th + 0.5 * h * k1)
                k3 = 2 * np.sin(th + 0.5 * h * k2)
                k4 = 2 * np.sin(th + h * k3)
                th += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
            return th

        cfg = QiteConfig(dtau=0.1, integrator="rk4", regularization=0.0)
        new = step(single_ry(), [np.pi / 2], Z, Statevector.zero(1), cfg)
        assert new[0] == pytest.approx(reference(np.pi / 2, 0.1), abs=1e-6)

    def test_small_step_energy_descent(self):
        cfg = QiteConfig(dtau=1e-3, integrator="euler", regularization=0.0)
        theta = np.array([1.1])
        s0 = Statevector.zero(1)
        e0 = expectation(Z, apply(single_ry(), theta, s0))
        new = step(single_ry(), theta, Z, s0, cfg)
        e1 = expectation(Z, apply(single_ry(), new, s0))
        theta_dot = 2 * np.sin(theta[0])
        c_entry = np.sin(theta[0]) / 2
        predicted = -2 * c_entry * theta_dot * cfg.dtau
        assert e1 < e0
        assert (e1 - e0) == pytest.approx(predicted, rel=1e-2)


class TestRunQite:
    def test_ground_state_of_z(self):
        cfg = QiteConfig(dtau=0.1, max_steps=500, grad_tol=1e-7)
        result = run_qite(single_ry(), [np.pi / 2], Z, Statevector.zero(1), cfg)
        assert result.energies[-1] == pytest.approx(-1.0, abs=1e-6)
        assert result.theta[0] == pytest.approx(np.pi, abs=1e-3)

    def test_stationary_start_converges_immediately(self):
        cfg = QiteConfig(dtau=0.1, grad_tol=1e-5)
        result = run_qite(single_ry(), [np.pi], Z, Statevector.zero(1), cfg)
        assert len(result.energies) == 1
        assert result.energies[0] == pytest.approx(-1.0, abs=1e-12)

    def test_h2_ground_state(self, h2_series, rng):
        _, h = h2_series.nearest(0.95)
        from ssqite.exact_oracle import eigensolve

        exact = eigensolve(h).eigenvalues[0]
        cfg = QiteConfig(dtau=0.15, max_steps=500, grad_tol=1e-5)
        theta0 = np.random.default_rng(11).normal(0, 0.1, 16)
        result = run_qite(build_twolocal(), theta0, h, Statevector.zero(2), cfg)
        assert result.energies[-1] == pytest.approx(exact, abs=1.6e-3)

    def test_max_steps_carries_trace(self):
        cfg = QiteConfig(dtau=0.05, max_steps=5, grad_tol=0.0)
        with pytest.raises(MaxStepsExceeded) as exc:
            run_qite(single_ry(), [np.pi / 2], Z, Statevector.zero(1), cfg)
        assert len(exc.value.energies) == 6
        assert exc.value.theta.shape == (1,)

    def test_energy_monotone_euler_small_steps(self, h2_series):
        _, h = h2_series.nearest(0.95)
        cfg = QiteConfig(dtau=0.05, integrator="euler", max_steps=200, grad_tol=0.0)
        theta0 = np.random.default_rng(11).normal(0, 0.1, 16)
        with pytest.raises(MaxStepsExceeded) as exc:
            run_qite(build_twolocal(), theta0, h, Statevector.zero(2), cfg)
        energies = exc.value.energies
        assert np.all(np.diff(energies) <= 1e-9)

    def test_rk4_euler_consistency_ratio(self, h2_series):
        # Euler's deviation from rk4 over a fixed horizon shrinks by >= 1.8x
        # when the step is halved.
        _, h = h2_series.nearest(0.95)
        theta0 = np.random.default_rng(11).normal(0, 0.1, 16)
        s0 = Statevector.zero(2)
        c = build_twolocal()
        horizon = 1.6

        def final_theta(integrator, dtau):
            cfg = QiteConfig(
                dtau=dtau, integrator=integrator,
                max_steps=int(round(horizon / dtau)), grad_tol=0.0,
            )
            with pytest.raises(MaxStepsExceeded) as exc:
                run_qite(c, theta0, h, s0, cfg)
            return exc.value.theta

        reference = final_theta("rk4", 0.05)
        coarse = np.linalg.norm(final_theta("euler", 0.2) - reference)
        fine = np.linalg.norm(final_theta("euler", 0.1) - reference)
        assert coarse / fine >= 1.8
