"""Real-weighted Pauli strings and sums."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce

import numpy as np

_MATS = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.diag([1, -1]).astype(complex),
}


@dataclass(frozen=True)
class PauliTerm:
    coefficient: float
    paulis: dict[int, str] = field(default_factory=dict)

    def __post_init__(self):
        if set(self.paulis.values()) - {"X", "Y", "Z"}:
            raise ValueError(f"bad Pauli letters in {self.paulis}")

    @classmethod
    def from_label(cls, label: str, coefficient: float = 1.0) -> "PauliTerm":
        """``label`` is read with qubit 0 rightmost, like outcome bitstrings."""
        label = label.upper()
        if set(label) - set("IXYZ"):
            raise ValueError(f"bad Pauli label {label!r}")
        n = len(label)
        return cls(float(coefficient), {n - 1 - i: c for i, c in enumerate(label) if c != "I"})

    def label(self, num_qubits: int) -> str:
        return "".join(self.paulis.get(q, "I") for q in reversed(range(num_qubits)))

    def matrix(self, num_qubits: int) -> np.ndarray:
        mats = [_MATS[self.paulis.get(q, "I")] for q in reversed(range(num_qubits))]
        return self.coefficient * reduce(np.kron, mats)

    def diagonal_value(self, index: int) -> float:
        """Eigenvalue on basis state ``index`` for Z/I-only terms."""
        if set(self.paulis.values()) - {"Z"}:
            raise ValueError("diagonal_value needs a Z-only term")
        parity = sum((index >> q) & 1 for q in self.paulis) % 2
        return self.coefficient * (-1) ** parity


@dataclass(frozen=True)
class PauliSum:
    terms: tuple[PauliTerm, ...] = ()
    constant: float = 0.0

    def matrix(self, num_qubits: int) -> np.ndarray:
        m = self.constant * np.eye(2 ** num_qubits, dtype=complex)
        for term in self.terms:
            m = m + term.matrix(num_qubits)
        return m

    def diagonal(self, num_qubits: int) -> np.ndarray:
        idx = np.arange(2 ** num_qubits)
        out = np.full(2 ** num_qubits, self.constant, dtype=float)
        for term in self.terms:
            parity = np.zeros_like(idx)
            for q in term.paulis:
                parity ^= (idx >> q) & 1
            out += term.coefficient * (1 - 2 * parity)
        return out
