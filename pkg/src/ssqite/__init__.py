"""Subspace-search quantum imaginary time evolution on a statevector simulator."""

from . import errors
from .exact_oracle import Spectrum, eigensolve, reference_curve
from .pauli_algebra import (
    GeometrySeries,
    PauliString,
    PauliSum,
    decompose_dense,
    load_geometry_series,
    parse_pauli_string,
    to_dense,
)
from .qite_engine import McLachlanSystem, QiteConfig, QiteResult, assemble, run_qite, solve, step
from .simulator import (
    Circuit,
    Gate,
    Statevector,
    apply,
    build_excitation_preserving,
    build_twolocal,
    derivative_state,
    expectation,
    hadamard_test,
    overlap,
    sample_expectation,
)
from .subspace import (
    OrthoReport,
    SsqiteConfig,
    SsvqeWeights,
    SubspaceResult,
    SubspaceRun,
    init_schedule,
    iteration,
    ortho_report,
    run,
    ssvqe_loss,
)

__all__ = [
    "errors",
    "Spectrum",
    "eigensolve",
    "reference_curve",
    "GeometrySeries",
    "PauliString",
    "PauliSum",
    "decompose_dense",
    "load_geometry_series",
    "parse_pauli_string",
    "to_dense",
    "McLachlanSystem",
    "QiteConfig",
    "QiteResult",
    "assemble",
    "run_qite",
    "solve",
    "step",
    "Circuit",
    "Gate",
    "Statevector",
    "apply",
    "build_excitation_preserving",
    "build_twolocal",
    "derivative_state",
    "expectation",
    "hadamard_test",
    "overlap",
    "sample_expectation",
    "OrthoReport",
    "SsqiteConfig",
    "SsvqeWeights",
    "SubspaceResult",
    "SubspaceRun",
    "init_schedule",
    "iteration",
    "ortho_report",
    "run",
    "ssvqe_loss",
]
