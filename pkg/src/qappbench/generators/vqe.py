"""UCC-style ansatz circuit with fixed parameters, read from a data file.

The ansatz file is JSON::

    {"hf_occupation": "001", "terms": [{"pauli": "XYI", "theta": 0.1}, ...]}

Bit and Pauli strings are read with qubit 0 rightmost. Each term contributes
``exp(-i theta/2 P)``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from ..circuit import Circuit, GateOp, cx, h, rx, rz, x
from .pauli import PauliTerm

DEFAULT_ANSATZ = "lih_3q_ansatz.json"


class AnsatzSpecError(ValueError):
    pass


@dataclass(frozen=True)
class AnsatzSpec:
    hf_occupation: str
    terms: tuple[tuple[str, float], ...]

    @property
    def num_qubits(self) -> int:
        return len(self.hf_occupation)

    @classmethod
    def from_json(cls, data) -> "AnsatzSpec":
        if not isinstance(data, dict) or set(data) - {"hf_occupation", "terms", "description",
                                                       "version", "provenance"}:
            raise AnsatzSpecError("ansatz spec must be an object with hf_occupation and terms")
        occ = data.get("hf_occupation")
        if not isinstance(occ, str) or not occ or set(occ) - {"0", "1"}:
            raise AnsatzSpecError("hf_occupation must be a binary string")
        terms = data.get("terms", [])
        if not isinstance(terms, list):
            raise AnsatzSpecError("terms must be a list")
        parsed = []
        for term in terms:
            try:
                label, theta = term["pauli"], float(term["theta"])
            except (KeyError, TypeError, ValueError) as exc:
                raise AnsatzSpecError(f"bad term {term!r}") from exc
            if not isinstance(label, str) or len(label) != len(occ) or set(label.upper()) - set("IXYZ"):
                raise AnsatzSpecError(f"Pauli label {label!r} does not match {len(occ)} qubits")
            parsed.append((label.upper(), theta))
        return cls(occ, tuple(parsed))


def load_ansatz_spec(path: str | Path | None = None) -> AnsatzSpec:
    if path is None:
        text = resources.files(__package__).joinpath("data", DEFAULT_ANSATZ).read_text("utf-8")
    else:
        text = Path(path).read_text("utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise AnsatzSpecError(str(exc)) from exc
    return AnsatzSpec.from_json(data)


def pauli_evolution_ops(term: PauliTerm, theta: float) -> list[GateOp]:
    """exp(-i theta/2 P): basis change, CNOT ladder, RZ(theta), unladder."""
    support = sorted(term.paulis)
    if not support:
        return []
    pre: list[GateOp] = []
    post: list[GateOp] = []
    for q in support:
        letter = term.paulis[q]
        if letter == "X":
            pre.append(h(q))
            post.append(h(q))
        elif letter == "Y":
            pre.append(rx(q, np.pi / 2))
            post.append(rx(q, -np.pi / 2))
    ladder = [cx(a, b) for a, b in zip(support, support[1:])]
    return pre + ladder + [rz(support[-1], theta)] + ladder[::-1] + post


def vqe_ansatz_circuit(spec: AnsatzSpec | None = None) -> Circuit:
    spec = spec or load_ansatz_spec()
    n = spec.num_qubits
    ops: list[GateOp] = [x(n - 1 - i) for i, bit in enumerate(spec.hf_occupation) if bit == "1"]
    for label, theta in spec.terms:
        ops += pauli_evolution_ops(PauliTerm.from_label(label), theta)
    return Circuit(n, tuple(ops), f"vqe_{n}q", measured=True)
