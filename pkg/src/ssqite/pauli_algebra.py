"""Pauli-sum Hamiltonians: parsing, dense conversion, and geometry-series files.

Tensor ordering convention, used everywhere in this package: position 0 of a
Pauli string (the leftmost character) acts on the highest-numbered bit of the
basis index, i.e. ``to_dense("XZ") == kron(X, Z)``.  Equivalently, qubit ``q``
corresponds to axis ``q`` of the statevector reshaped to ``(2,) * n``.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import (
    EmptyString,
    InvalidLabel,
    NonMonotonicGeometry,
    NotHermitian,
    NotPowerOfTwo,
    ParseError,
    TooManyQubits,
)

PAULI_MATRICES = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

_LABELS = "IXYZ"
DENSE_QUBIT_LIMIT = 12


@dataclass(frozen=True)
class PauliString:
    """Tensor product of single-qubit Paulis, stored as a label tuple."""

    ops: tuple[str, ...]

    def __post_init__(self):
        if len(self.ops) == 0:
            raise EmptyString("Pauli string must act on at least one qubit")
        for label in self.ops:
            if label not in PAULI_MATRICES:
                raise InvalidLabel(f"unknown Pauli label {label!r}")

    @property
    def n(self) -> int:
        return len(self.ops)

    def __str__(self) -> str:
        return "".join(self.ops)

    def __iter__(self):
        return iter(self.ops)


def parse_pauli_string(text: str) -> PauliString:
    """Parse a token like ``"XZIY"``; position 0 is the leftmost character."""
    if not isinstance(text, str) or len(text) == 0:
        raise EmptyString("empty Pauli string token")
    return PauliString(tuple(text))


@dataclass(frozen=True)
class PauliSum:
    """Weighted sum of Pauli strings with real coefficients (Hartree).

    Terms are merged so no string appears twice; all strings share length n.
    """

    terms: tuple[tuple[float, PauliString], ...]
    n: int

    @classmethod
    def from_terms(cls, terms, n: int | None = None) -> "PauliSum":
        """Build from (coefficient, string) pairs, merging duplicate strings.

        Coefficients must be real; complex values are rejected outright.
        """
        merged: dict[str, tuple[float, PauliString]] = {}
        width = n
        for coeff, string in terms:
            if isinstance(string, str):
                string = parse_pauli_string(string)
            if isinstance(coeff, complex):
                if abs(coeff.imag) > 0:
                    raise InvalidLabel(f"coefficient {coeff} is not real")
                coeff = coeff.real
            coeff = float(coeff)
            if width is None:
                width = string.n
            elif string.n != width:
                raise InvalidLabel(
                    f"string {string} has length {string.n}, expected {width}"
                )
            key = str(string)
            if key in merged:
                merged[key] = (merged[key][0] + coeff, string)
            else:
                merged[key] = (coeff, string)
        if width is None:
            raise EmptyString("a PauliSum needs at least one term or an explicit n")
        return cls(terms=tuple(merged.values()), n=width)

    def __len__(self) -> int:
        return len(self.terms)

    def coefficient(self, string: str) -> float:
        """Coefficient of the given string label, 0.0 if absent."""
        for coeff, s in self.terms:
            if str(s) == string:
                return coeff
        return 0.0

    def __str__(self) -> str:
        return " + ".join(f"{c:+.12g}*{s}" for c, s in self.terms)


def to_dense(h: PauliSum) -> np.ndarray:
    """Dense 2^n x 2^n matrix of the sum; Hermitian for real coefficients."""
    if h.n > DENSE_QUBIT_LIMIT:
        raise TooManyQubits(f"dense conversion capped at {DENSE_QUBIT_LIMIT} qubits")
    dim = 2 ** h.n
    out = np.zeros((dim, dim), dtype=complex)
    for coeff, string in h.terms:
        term = np.array([[1.0]], dtype=complex)
        for label in string:
            term = np.kron(term, PAULI_MATRICES[label])
        out += coeff * term
    return out


def decompose_dense(m: np.ndarray, drop_tol: float = 1e-12) -> PauliSum:
    """Expand a Hermitian matrix over the Pauli-string basis.

    Coefficients are ``2^-n * trace(m @ P)`` for each string P; entries with
    magnitude below ``drop_tol`` are omitted.
    """
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise NotPowerOfTwo(f"expected a square matrix, got shape {m.shape}")
    dim = m.shape[0]
    n = int(dim).bit_length() - 1
    if 2 ** n != dim or n < 1:
        raise NotPowerOfTwo(f"dimension {dim} is not a power of two >= 2")
    if np.max(np.abs(m - m.conj().T)) > 1e-10:
        raise NotHermitian("matrix deviates from Hermitian by more than 1e-10")

    # Contract each (row-bit, col-bit) axis pair against the four Paulis:
    # coeffs[j1..jn] = 2^-n * Tr[m * P_{j1} x ... x P_{jn}].
    basis = np.stack([PAULI_MATRICES[l] for l in _LABELS])  # (4, 2, 2)
    tensor = m.reshape((2,) * (2 * n))
    for t in range(n):
        # t qubits already contracted: layout is (rows..., cols..., paulis...)
        # with n - t row axes, so the leading row pairs with the col at n - t.
        tensor = np.tensordot(basis, tensor, axes=([1, 2], [n - t, 0]))
        # New Pauli axis arrives in front; rotate to the back so finished axes
        # stay ordered by string position.
        tensor = np.moveaxis(tensor, 0, -1)
    coeffs = tensor / dim  # shape (4,) * n, axis k = string position k

    terms = []
    flat = coeffs.reshape(-1)
    for idx in np.flatnonzero(np.abs(flat) >= drop_tol):
        digits = np.unravel_index(idx, (4,) * n)
        label = "".join(_LABELS[d] for d in digits)
        terms.append((flat[idx].real, parse_pauli_string(label)))
    return PauliSum.from_terms(terms, n=n)


@dataclass(frozen=True)
class GeometrySeries:
    """Per-bond-length Hamiltonians for one molecule, bond lengths ascending."""

    label: str
    points: tuple[tuple[float, PauliSum], ...]

    @property
    def bond_lengths(self) -> np.ndarray:
        return np.array([r for r, _ in self.points])

    @property
    def n(self) -> int:
        return self.points[0][1].n

    def nearest(self, bond_length: float, tol: float = 1e-6) -> tuple[float, PauliSum]:
        """Point whose bond length matches within tol; raises if none does."""
        from .errors import GeometryNotFound

        best = min(self.points, key=lambda p: abs(p[0] - bond_length))
        if abs(best[0] - bond_length) > tol:
            raise GeometryNotFound(
                f"no geometry within {tol} of R={bond_length} "
                f"(closest is {best[0]})"
            )
        return best

    def __len__(self) -> int:
        return len(self.points)


def load_geometry_series(path) -> GeometrySeries:
    """Read a Hamiltonian coefficient file.

    Format (line oriented, `#` starts a comment, blank lines ignored)::

        molecule H2
        geometry 0.95
        ZI   -0.3980
        XX    0.1810

    Bond lengths are Angstrom, coefficients Hartree.  Duplicate strings within
    a block are merged by addition; bond lengths must be strictly increasing.
    """
    path = Path(path)
    label: str | None = None
    blocks: list[tuple[float, list, int]] = []  # (R, term list, header line no)
    qubits: int | None = None

    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            fields = line.split()
            if fields[0] == "molecule":
                if label is not None:
                    raise ParseError("duplicate molecule header", lineno)
                if len(fields) != 2:
                    raise ParseError("expected 'molecule <name>'", lineno)
                label = fields[1]
            elif fields[0] == "geometry":
                if len(fields) != 2:
                    raise ParseError("expected 'geometry <R>'", lineno)
                try:
                    bond = float(fields[1])
                except ValueError:
                    raise ParseError(f"bad bond length {fields[1]!r}", lineno) from None
                blocks.append((bond, [], lineno))
            else:
                if len(fields) != 2:
                    raise ParseError(
                        "expected '<pauli-string> <coefficient>'", lineno
                    )
                if not blocks:
                    raise ParseError("term before any geometry line", lineno)
                try:
                    string = parse_pauli_string(fields[0])
                except (InvalidLabel, EmptyString) as exc:
                    raise ParseError(str(exc), lineno) from None
                try:
                    coeff = float(fields[1])
                except ValueError:
                    raise ParseError(f"bad coefficient {fields[1]!r}", lineno) from None
                if qubits is None:
                    qubits = string.n
                elif string.n != qubits:
                    raise ParseError(
                        f"string length {string.n} != {qubits} used earlier", lineno
                    )
                blocks[-1][1].append((coeff, string))

    if label is None:
        raise ParseError(f"{path}: missing 'molecule' header")
    if not blocks:
        raise ParseError(f"{path}: no geometry blocks")

    points = []
    for bond, terms, lineno in blocks:
        if not terms:
            raise ParseError("geometry block has no terms", lineno)
        points.append((bond, PauliSum.from_terms(terms, n=qubits)))

    bonds = [r for r, _ in points]
    if any(b2 <= b1 for b1, b2 in zip(bonds, bonds[1:])):
        raise NonMonotonicGeometry(
            f"bond lengths must be strictly increasing, got {bonds}"
        )
    return GeometrySeries(label=label, points=tuple(points))
