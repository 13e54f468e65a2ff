"""Single-state imaginary-time evolution via the McLachlan linear system.

Each step solves A(theta) theta_dot = C(theta) with
A_ij = Re<d_i phi|d_j phi> and C_i = -Re<d_i phi|H|phi>, then advances theta
by explicit Euler or classical Runge-Kutta.  Because C = -1/2 grad E, the flow
descends the energy towards the ground state reachable from the start.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import MaxStepsExceeded, SingularSystem
from .pauli_algebra import PauliSum
from .simulator import Circuit, Statevector, apply_pauli_sum, derivative_stack


@dataclass(frozen=True)
class McLachlanSystem:
    """Gram matrix, driving vector, and current energy for one trial state."""

    a: np.ndarray
    c: np.ndarray
    energy: float

    @property
    def num_params(self) -> int:
        return self.c.shape[0]


@dataclass(frozen=True)
class QiteConfig:
    """Knobs for a single-state imaginary-time run.

    ``phase_correction`` switches the metric to the global-phase-corrected
    (Fubini-Study) variant A - g g^T with g_i = Im<phi|d_i phi>, which zeroes
    out pure-phase directions; the plain form is the default.
    """

    dtau: float = 0.1
    regularization: float = 1e-6
    max_steps: int = 500
    grad_tol: float = 1e-5
    integrator: str = "rk4"
    phase_correction: bool = False

    def __post_init__(self):
        if self.dtau <= 0:
            raise ValueError(f"dtau must be positive, got {self.dtau}")
        if self.max_steps < 1:
            raise ValueError(f"max_steps must be >= 1, got {self.max_steps}")
        if self.regularization < 0:
            raise ValueError("regularization must be nonnegative")
        if self.integrator not in ("euler", "rk4"):
            raise ValueError(f"unknown integrator {self.integrator!r}")


def assemble(c: Circuit, theta, h: PauliSum, s0: Statevector,
             phase_correction: bool = False) -> McLachlanSystem:
    """Measure A, C, and the energy at the current parameters."""
    phi, deriv = derivative_stack(c, theta, s0)
    a = np.real(deriv.conj() @ deriv.T)
    a = 0.5 * (a + a.T)  # kill asymmetric rounding noise
    h_phi = apply_pauli_sum(h, phi.amps)
    cvec = -np.real(deriv.conj() @ h_phi)
    energy = float(np.real(np.vdot(phi.amps, h_phi)))
    if phase_correction:
        g = np.imag(phi.amps.conj() @ deriv.T)
        a = a - np.outer(g, g)
    return McLachlanSystem(a=a, c=cvec, energy=energy)


def solve(sys: McLachlanSystem, regularization: float) -> np.ndarray:
    """Solve (A + lambda I) theta_dot = C.

    Tries a symmetric positive-definite factorization first; if that fails,
    falls back to a least-squares pseudo-solve truncating singular values
    below 1e-8 of the largest.
    """
    if regularization < 0:
        raise ValueError("regularization must be nonnegative")
    a = sys.a + regularization * np.eye(sys.num_params)
    if not np.all(np.isfinite(a)) or not np.all(np.isfinite(sys.c)):
        raise SingularSystem("non-finite entries in the McLachlan system")
    if regularization > 0:
        # Gram matrix + positive shift: positive definite unless degenerate.
        try:
            factor = scipy.linalg.cho_factor(a, check_finite=False)
            return scipy.linalg.cho_solve(factor, sys.c, check_finite=False)
        except scipy.linalg.LinAlgError:
            pass
    # With no shift A is singular whenever the ansatz is locally redundant,
    # so the definite factorization cannot apply; truncate instead.
    try:
        theta_dot, *_ = np.linalg.lstsq(a, sys.c, rcond=1e-8)
        return theta_dot
    except np.linalg.LinAlgError as exc:
        raise SingularSystem(f"factorization and least-squares both failed: {exc}")


def _theta_dot(c: Circuit, theta, h: PauliSum, s0: Statevector,
               cfg: QiteConfig) -> np.ndarray:
    sys = assemble(c, theta, h, s0, phase_correction=cfg.phase_correction)
    return solve(sys, cfg.regularization)


def _advance(c: Circuit, theta: np.ndarray, h: PauliSum, s0: Statevector,
             cfg: QiteConfig, k1: np.ndarray) -> np.ndarray:
    """One integrator update given the already-measured first stage."""
    if cfg.integrator == "euler":
        return theta + cfg.dtau * k1
    dt = cfg.dtau
    k2 = _theta_dot(c, theta + 0.5 * dt * k1, h, s0, cfg)
    k3 = _theta_dot(c, theta + 0.5 * dt * k2, h, s0, cfg)
    k4 = _theta_dot(c, theta + dt * k3, h, s0, cfg)
    return theta + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def step(c: Circuit, theta, h: PauliSum, s0: Statevector,
         cfg: QiteConfig) -> np.ndarray:
    """Advance theta by one imaginary-time step of size cfg.dtau.

    The rk4 integrator re-assembles and re-solves the full system at every
    intermediate stage (nonlinear Runge-Kutta, not a frozen linearization).
    """
    theta = np.asarray(theta, dtype=float)
    k1 = _theta_dot(c, theta, h, s0, cfg)
    return _advance(c, theta, h, s0, cfg, k1)


@dataclass(frozen=True)
class QiteResult:
    theta: np.ndarray
    energies: np.ndarray


def run_qite(c: Circuit, theta0, h: PauliSum, s0: Statevector,
             cfg: QiteConfig) -> QiteResult:
    """Evolve until the parameter velocity stalls.

    Stops when ||theta_dot||_inf < cfg.grad_tol; raises MaxStepsExceeded
    (carrying the energy trace) if the cap is hit first.  The returned
    energies hold one entry per visited parameter vector, final one included.
    """
    theta = np.asarray(theta0, dtype=float).copy()
    energies: list[float] = []
    for _ in range(cfg.max_steps):
        sys = assemble(c, theta, h, s0, phase_correction=cfg.phase_correction)
        energies.append(sys.energy)
        theta_dot = solve(sys, cfg.regularization)
        if np.max(np.abs(theta_dot)) < cfg.grad_tol:
            return QiteResult(theta=theta, energies=np.array(energies))
        theta = _advance(c, theta, h, s0, cfg, theta_dot)
    final = assemble(c, theta, h, s0, phase_correction=cfg.phase_correction)
    energies.append(final.energy)
    raise MaxStepsExceeded(
        f"no convergence to {cfg.grad_tol} within {cfg.max_steps} steps",
        theta=theta,
        energies=np.array(energies),
    )
