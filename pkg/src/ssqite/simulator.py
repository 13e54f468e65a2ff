"""Dense statevector simulation of parameterized circuits.

Rotation convention: R_G(theta) = exp(-i * theta * G / 2) for G in {X, Y, Z}.
Qubit q is axis q of the statevector reshaped to (2,) * n, matching the Pauli
string ordering in :mod:`ssqite.pauli_algebra` (qubit 0 = leftmost label).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatch,
    SlotOutOfRange,
    UnsupportedMode,
    ZeroShots,
)
from .pauli_algebra import PAULI_MATRICES, PauliString, PauliSum

_SQRT_X = 0.5 * np.array([[1 + 1j, 1 - 1j], [1 - 1j, 1 + 1j]])
_CNOT = np.array(
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
)
_CSX = np.block(
    [[np.eye(2), np.zeros((2, 2))], [np.zeros((2, 2)), _SQRT_X]]
).astype(complex)
_HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)

ROTATION_KINDS = ("RX", "RY", "RZ")
GATE_KINDS = ROTATION_KINDS + ("CNOT", "CSX", "X")

# Generator of each rotation kind; dR/dtheta = (-i/2) * G * R.
_GENERATORS = {"RX": PAULI_MATRICES["X"], "RY": PAULI_MATRICES["Y"], "RZ": PAULI_MATRICES["Z"]}


@dataclass(frozen=True)
class Statevector:
    """Normalized complex amplitude vector over 2^n basis states."""

    amps: np.ndarray
    n: int

    def __post_init__(self):
        amps = np.asarray(self.amps, dtype=complex)
        object.__setattr__(self, "amps", amps)
        if amps.shape != (2 ** self.n,):
            raise DimensionMismatch(
                f"amplitude vector of length {amps.shape} for n={self.n}"
            )
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > 1e-10:
            raise ValueError(f"state norm {norm} deviates from 1")

    @classmethod
    def from_label(cls, label: str) -> "Statevector":
        """Computational basis state from a ket label such as ``"010"``."""
        n = len(label)
        amps = np.zeros(2 ** n, dtype=complex)
        amps[int(label, 2)] = 1.0
        return cls(amps=amps, n=n)

    @classmethod
    def zero(cls, n: int) -> "Statevector":
        return cls.from_label("0" * n)


@dataclass(frozen=True)
class Gate:
    """One circuit element.

    ``targets`` lists qubit indices; for CNOT and CSX the first entry is the
    control and the second the target.  Rotation gates carry exactly one
    ``param_slot`` indexing the circuit parameter vector; slots may be shared
    between gates.
    """

    kind: str
    targets: tuple[int, ...]
    param_slot: int | None = None

    def __post_init__(self):
        if self.kind not in GATE_KINDS:
            raise DimensionMismatch(f"unknown gate kind {self.kind!r}")
        if self.kind in ROTATION_KINDS:
            if self.param_slot is None:
                raise DimensionMismatch(f"{self.kind} requires a parameter slot")
            if len(self.targets) != 1:
                raise DimensionMismatch(f"{self.kind} acts on one qubit")
        else:
            if self.param_slot is not None:
                raise DimensionMismatch(f"{self.kind} takes no parameter")
            expected = 1 if self.kind == "X" else 2
            if len(self.targets) != expected:
                raise DimensionMismatch(f"{self.kind} acts on {expected} qubit(s)")
        if len(set(self.targets)) != len(self.targets):
            raise DimensionMismatch("gate targets must be distinct")

    def __str__(self) -> str:
        qubits = ",".join(f"q{t}" for t in self.targets)
        if self.param_slot is not None:
            return f"{self.kind}({qubits}; theta[{self.param_slot}])"
        return f"{self.kind}({qubits})"


@dataclass(frozen=True)
class Circuit:
    """Ordered gate list with ``num_params`` shared parameter slots."""

    n: int
    gates: tuple[Gate, ...]
    num_params: int

    def __post_init__(self):
        seen = set()
        for gate in self.gates:
            for t in gate.targets:
                if not 0 <= t < self.n:
                    raise DimensionMismatch(f"target {t} outside 0..{self.n - 1}")
            if gate.param_slot is not None:
                if not 0 <= gate.param_slot < self.num_params:
                    raise SlotOutOfRange(
                        f"slot {gate.param_slot} outside 0..{self.num_params - 1}"
                    )
                seen.add(gate.param_slot)
        missing = set(range(self.num_params)) - seen
        if missing:
            raise SlotOutOfRange(f"parameter slots never used: {sorted(missing)}")

    def __str__(self) -> str:
        header = f"Circuit(n={self.n}, params={self.num_params})"
        return "\n".join([header] + [f"  {g}" for g in self.gates])


# --- low-level tensor ops -------------------------------------------------

def _apply_matrix(tensor: np.ndarray, mat: np.ndarray, axes: tuple[int, ...]) -> np.ndarray:
    """Apply a (2^k x 2^k) matrix to the given k qubit axes of a state tensor."""
    k = len(axes)
    out = np.tensordot(mat.reshape((2,) * (2 * k)), tensor,
                       axes=(list(range(k, 2 * k)), list(axes)))
    return np.moveaxis(out, list(range(k)), list(axes))


def _gate_matrix(gate: Gate, theta: np.ndarray) -> np.ndarray:
    if gate.kind in ROTATION_KINDS:
        half = 0.5 * theta[gate.param_slot]
        c, s = math.cos(half), math.sin(half)
        if gate.kind == "RX":
            return np.array([[c, -1j * s], [-1j * s, c]])
        if gate.kind == "RY":
            return np.array([[c, -s], [s, c]], dtype=complex)
        return np.array([[c - 1j * s, 0], [0, c + 1j * s]])
    if gate.kind == "CNOT":
        return _CNOT
    if gate.kind == "CSX":
        return _CSX
    return PAULI_MATRICES["X"]


def _apply_gate(tensor: np.ndarray, gate: Gate, theta: np.ndarray, offset: int = 0) -> np.ndarray:
    """Apply one gate; ``offset`` shifts qubit axes past leading batch axes."""
    axes = tuple(offset + t for t in gate.targets)
    return _apply_matrix(tensor, _gate_matrix(gate, theta), axes)


def apply(c: Circuit, theta, s: Statevector) -> Statevector:
    """Run the circuit on a state: ``U(theta) |s>``."""
    theta = np.asarray(theta, dtype=float)
    if theta.shape != (c.num_params,):
        raise DimensionMismatch(
            f"theta has shape {theta.shape}, expected ({c.num_params},)"
        )
    if s.n != c.n:
        raise DimensionMismatch(f"state on {s.n} qubits, circuit on {c.n}")
    tensor = s.amps.reshape((2,) * c.n)
    for gate in c.gates:
        tensor = _apply_gate(tensor, gate, theta)
    return Statevector(amps=tensor.reshape(-1), n=c.n)


def apply_pauli_string(string: PauliString, amps: np.ndarray) -> np.ndarray:
    """Product of single-qubit Paulis acting on a raw amplitude vector."""
    n = string.n
    tensor = amps.reshape((2,) * n)
    for q, label in enumerate(string):
        if label == "I":
            continue
        if label in ("X", "Y"):
            tensor = np.flip(tensor, axis=q)
        if label != "X":
            # Z: diag(1, -1); Y after the flip: diag(-i, i).
            phase = np.array([1, -1]) if label == "Z" else np.array([-1j, 1j])
            shape = [1] * n
            shape[q] = 2
            tensor = tensor * phase.reshape(shape)
    return tensor.reshape(-1)


def apply_pauli_sum(h: PauliSum, amps: np.ndarray) -> np.ndarray:
    """``H |psi>`` for a raw amplitude vector."""
    out = np.zeros_like(amps, dtype=complex)
    for coeff, string in h.terms:
        out += coeff * apply_pauli_string(string, amps)
    return out


def expectation(h: PauliSum, s: Statevector) -> float:
    """Real expectation value <s|H|s> in Hartree."""
    if h.n != s.n:
        raise DimensionMismatch(f"operator on {h.n} qubits, state on {s.n}")
    value = np.vdot(s.amps, apply_pauli_sum(h, s.amps))
    if abs(value.imag) > 1e-10:
        raise DimensionMismatch(f"expectation has imaginary residue {value.imag}")
    return float(value.real)


def overlap(a: Statevector, b: Statevector) -> complex:
    """Inner product <a|b>."""
    if a.n != b.n:
        raise DimensionMismatch(f"states on {a.n} and {b.n} qubits")
    return complex(np.vdot(a.amps, b.amps))


# --- analytic parameter derivatives ----------------------------------------

def _occurrences(c: Circuit, slot: int) -> list[int]:
    return [k for k, g in enumerate(c.gates) if g.param_slot == slot]


def derivative_state(c: Circuit, theta, i: int, s0: Statevector) -> np.ndarray:
    """Exact d/d theta_i of ``apply(c, theta, s0)``, unnormalized.

    Sums the insertion of (-i/2) x generator over every gate sharing slot i.
    """
    theta = np.asarray(theta, dtype=float)
    if not 0 <= i < c.num_params:
        raise SlotOutOfRange(f"slot {i} outside 0..{c.num_params - 1}")
    if s0.n != c.n:
        raise DimensionMismatch(f"state on {s0.n} qubits, circuit on {c.n}")
    positions = _occurrences(c, i)
    total = np.zeros((2,) * c.n, dtype=complex)
    for pos in positions:
        tensor = s0.amps.reshape((2,) * c.n)
        for k, gate in enumerate(c.gates):
            tensor = _apply_gate(tensor, gate, theta)
            if k == pos:
                gen = _GENERATORS[gate.kind]
                tensor = -0.5j * _apply_matrix(tensor, gen, (gate.targets[0],))
        total = total + tensor
    return total.reshape(-1)


def derivative_stack(c: Circuit, theta, s0: Statevector) -> tuple[Statevector, np.ndarray]:
    """Final state plus all slot derivatives in one forward sweep.

    Returns ``(phi, D)`` with ``D[i] == derivative_state(c, theta, i, s0)``.
    """
    theta = np.asarray(theta, dtype=float)
    if theta.shape != (c.num_params,):
        raise DimensionMismatch(
            f"theta has shape {theta.shape}, expected ({c.num_params},)"
        )
    if s0.n != c.n:
        raise DimensionMismatch(f"state on {s0.n} qubits, circuit on {c.n}")
    shape = (2,) * c.n
    psi = s0.amps.reshape(shape)
    stack = np.zeros((c.num_params,) + shape, dtype=complex)
    for gate in c.gates:
        stack = _apply_gate(stack, gate, theta, offset=1)
        psi = _apply_gate(psi, gate, theta)
        if gate.param_slot is not None:
            gen = _GENERATORS[gate.kind]
            stack[gate.param_slot] += -0.5j * _apply_matrix(psi, gen, (gate.targets[0],))
    phi = Statevector(amps=psi.reshape(-1), n=c.n)
    return phi, stack.reshape(c.num_params, -1)


# --- paper ansatz builders --------------------------------------------------

def build_twolocal(n: int = 2, layers: int = 4) -> Circuit:
    """Two-qubit hardware-efficient ansatz: RX/RY layers with CNOT entanglers.

    Each layer applies RX then RY on both qubits (four fresh slots); a CNOT
    q0->q1 sits between consecutive layers, none after the last.  The default
    four layers give 16 parameters.
    """
    if n != 2:
        raise DimensionMismatch("twolocal ansatz is defined on 2 qubits")
    gates: list[Gate] = []
    slot = 0
    for layer in range(layers):
        gates.append(Gate("RX", (0,), slot))
        gates.append(Gate("RX", (1,), slot + 1))
        gates.append(Gate("RY", (0,), slot + 2))
        gates.append(Gate("RY", (1,), slot + 3))
        slot += 4
        if layer < layers - 1:
            gates.append(Gate("CNOT", (0, 1)))
    return Circuit(n=2, gates=tuple(gates), num_params=slot)


def _excitation_block(qa: int, qb: int, slot_a: int, slot_b: int) -> list[Gate]:
    # CNOT / controlled-sqrt(X) sandwich around RZ pair; the composite is
    # block-diagonal on Hamming-weight sectors (equals SWAP at zero angles).
    return [
        Gate("CNOT", (qa, qb)),
        Gate("CSX", (qb, qa)),
        Gate("CNOT", (qa, qb)),
        Gate("RZ", (qa,), slot_a),
        Gate("RZ", (qb,), slot_b),
        Gate("CNOT", (qa, qb)),
        Gate("CSX", (qb, qa)),
        Gate("CNOT", (qa, qb)),
    ]


def build_excitation_preserving(n: int = 3, blocks: int = 8) -> Circuit:
    """Three-qubit excitation-preserving ansatz of two-parameter blocks.

    Blocks alternate between qubit pairs (0,1) and (1,2); the default eight
    blocks give 16 parameters.  Every block commutes with the total excitation
    number, so evolution stays inside the initial Hamming-weight sector.
    """
    if n != 3:
        raise DimensionMismatch("excitation-preserving ansatz is defined on 3 qubits")
    gates: list[Gate] = []
    slot = 0
    for b in range(blocks):
        qa, qb = (0, 1) if b % 2 == 0 else (1, 2)
        gates.extend(_excitation_block(qa, qb, slot, slot + 1))
        slot += 2
    return Circuit(n=3, gates=tuple(gates), num_params=slot)


# --- Hadamard-test estimation ----------------------------------------------

def _controlled_apply(tensor: np.ndarray, mat: np.ndarray, axes: tuple[int, ...],
                      anc_axis: int, anc_value: int) -> np.ndarray:
    """Apply ``mat`` on system axes only where the ancilla bit equals anc_value."""
    idx = [slice(None)] * tensor.ndim
    idx[anc_axis] = anc_value
    out = tensor.copy()
    out[tuple(idx)] = _apply_matrix(tensor[tuple(idx)], mat, axes)
    return out


def _ancilla_z(tensor: np.ndarray, anc_axis: int) -> float:
    probs = np.abs(tensor) ** 2
    other = tuple(a for a in range(tensor.ndim) if a != anc_axis)
    p = probs.sum(axis=other)
    return float(p[0] - p[1])


def _hadamard_test_pair(c: Circuit, theta: np.ndarray, s0: Statevector,
                        pos_a: int, pos_b: int,
                        tail: PauliString | None, imaginary: bool) -> float:
    """Ancilla Z expectation of one Hadamard-test circuit.

    Branch anc=0 carries the generator insertion at ``pos_a``, branch anc=1
    the one at ``pos_b`` (or, when ``tail`` is given, the Pauli string applied
    after the full circuit).  With ``imaginary`` an S-dagger turns the readout
    into the imaginary part of the branch overlap.
    """
    n = c.n
    anc = n  # ancilla appended as the trailing axis
    joint = np.zeros((2,) * (n + 1), dtype=complex)
    joint[..., 0] = s0.amps.reshape((2,) * n)
    joint = _apply_matrix(joint, _HADAMARD, (anc,))
    if imaginary:
        sdg = np.array([[1, 0], [0, -1j]])
        joint = _apply_matrix(joint, sdg, (anc,))

    if tail is None and pos_a == pos_b:
        insertions = {pos_a: "both"}
    elif tail is None:
        insertions = {pos_a: 0, pos_b: 1}
    else:
        insertions = {pos_a: 0}
    last = max(insertions) if tail is None else len(c.gates) - 1
    for k, gate in enumerate(c.gates):
        joint = _apply_gate(joint, gate, theta)
        if k in insertions:
            gen = _GENERATORS[gate.kind]
            target = (gate.targets[0],)
            branch = insertions[k]
            if branch == "both":
                joint = _apply_matrix(joint, gen, target)
            else:
                joint = _controlled_apply(joint, gen, target, anc, branch)
        if tail is None and k == last:
            break
    if tail is not None:
        for q, label in enumerate(tail):
            if label != "I":
                joint = _controlled_apply(joint, PAULI_MATRICES[label], (q,), anc, 1)
    joint = _apply_matrix(joint, _HADAMARD, (anc,))
    return _ancilla_z(joint, anc)


def hadamard_test(c: Circuit, theta, mode: str, i: int, j: int | None = None,
                  h: PauliSum | None = None, s0: Statevector | None = None) -> float:
    """Estimate one McLachlan matrix or vector entry via ancilla circuits.

    ``mode="A-real"`` takes slot indices i, j and returns Re<d_i phi|d_j phi>;
    ``mode="C-real"`` takes slot i plus a Pauli sum and returns
    -Re<d_i phi|H|phi>.  Ancilla expectations are evaluated exactly on the
    statevector (the infinite-shot limit) and combined with the analytic
    insertion prefactors.
    """
    theta = np.asarray(theta, dtype=float)
    if s0 is None:
        s0 = Statevector.zero(c.n)
    if not 0 <= i < c.num_params:
        raise SlotOutOfRange(f"slot {i} outside 0..{c.num_params - 1}")

    if mode == "A-real":
        if j is None:
            raise UnsupportedMode("A-real mode needs a second slot index")
        if not 0 <= j < c.num_params:
            raise SlotOutOfRange(f"slot {j} outside 0..{c.num_params - 1}")
        total = 0.0
        for pos_i in _occurrences(c, i):
            for pos_j in _occurrences(c, j):
                a, b = sorted((pos_i, pos_j))
                total += 0.25 * _hadamard_test_pair(
                    c, theta, s0, a, b, tail=None, imaginary=False
                )
        return total
    if mode == "C-real":
        if h is None:
            raise UnsupportedMode("C-real mode needs a Hamiltonian")
        if h.n != c.n:
            raise DimensionMismatch(f"operator on {h.n} qubits, circuit on {c.n}")
        total = 0.0
        for pos in _occurrences(c, i):
            for coeff, string in h.terms:
                total += 0.5 * coeff * _hadamard_test_pair(
                    c, theta, s0, pos, pos, tail=string, imaginary=True
                )
        return total
    raise UnsupportedMode(f"unknown mode {mode!r}; use 'A-real' or 'C-real'")


# --- finite-shot estimation --------------------------------------------------

def sample_expectation(h: PauliSum, s: Statevector, shots: int, seed: int) -> float:
    """Unbiased finite-shot estimate of <s|H|s>.

    Each Pauli term is measured independently in its own eigenbasis with the
    full shot budget; outcomes are drawn from the exact +/-1 probabilities.
    """
    if shots < 1:
        raise ZeroShots(f"shots must be >= 1, got {shots}")
    if h.n != s.n:
        raise DimensionMismatch(f"operator on {h.n} qubits, state on {s.n}")
    rng = np.random.default_rng(seed)
    total = 0.0
    for coeff, string in h.terms:
        if all(label == "I" for label in string):
            total += coeff
            continue
        mean = float(np.vdot(s.amps, apply_pauli_string(string, s.amps)).real)
        p_plus = min(1.0, max(0.0, 0.5 * (1.0 + mean)))
        ones = rng.binomial(shots, p_plus)
        total += coeff * (2.0 * ones - shots) / shots
    return total
