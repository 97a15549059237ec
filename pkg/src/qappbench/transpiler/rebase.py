"""Rewrite circuits into the {RX, RY, RZ, CNOT} basis.

Connectivity is all-to-all, so no routing is done. After expansion a
peephole pass merges consecutive same-axis rotations on a qubit, cancels
back-to-back identical CNOTs, reduces angles to (-pi, pi] and drops rotations
below ``ANGLE_EPS``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..circuit import (BASIS_TAGS, ROTATION_TAGS, Circuit, GateOp, Tag, check_valid,
                       circuit_depth, cx, phase_aligned_deviation, rx, ry, rz, unitary_of)
from .mcx import _h, _toffoli, mcx_exact_ops

PI = np.pi
ANGLE_EPS = 1e-12
ORACLE_MAX_QUBITS = 10


class UnknownGateError(ValueError):
    pass


@dataclass
class DecompositionReport:
    input_counts: dict[str, int] = field(default_factory=dict)
    cnot_count: int = 0
    rotation_count: int = 0
    depth: int = 0
    max_deviation: float | None = None

    def to_json(self) -> dict:
        return {
            "input_counts": dict(sorted(self.input_counts.items())),
            "cnot_count": self.cnot_count,
            "rotation_count": self.rotation_count,
            "depth": self.depth,
            "max_deviation": self.max_deviation,
        }


def canonical_angle(theta: float) -> float:
    """Reduce ``theta`` into (-pi, pi]."""
    r = math.remainder(theta, 2 * PI)
    return PI if r == -PI else r


def expand(op: GateOp) -> list[GateOp]:
    """Basis-gate expansion of a single gate (exact up to global phase)."""
    tag, qs = op.tag, op.qubits
    if tag in BASIS_TAGS:
        return [op]
    if tag is Tag.H:
        return _h(qs[0])
    if tag is Tag.X:
        return [rx(qs[0], PI)]
    if tag is Tag.Y:
        return [ry(qs[0], PI)]
    if tag is Tag.Z:
        return [rz(qs[0], PI)]
    if tag is Tag.S:
        return [rz(qs[0], PI / 2)]
    if tag is Tag.T:
        return [rz(qs[0], PI / 4)]
    if tag is Tag.CZ:
        a, b = qs
        return _h(b) + [cx(a, b)] + _h(b)
    if tag is Tag.SWAP:
        a, b = qs
        return [cx(a, b), cx(b, a), cx(a, b)]
    if tag is Tag.CRZ:
        c, t = qs
        theta = op.params[0]
        return [rz(t, theta / 2), cx(c, t), rz(t, -theta / 2), cx(c, t)]
    if tag is Tag.CP:
        c, t = qs
        theta = op.params[0]
        return [rz(c, theta / 2), rz(t, theta / 2), cx(c, t), rz(t, -theta / 2), cx(c, t)]
    if tag is Tag.CCX:
        return _toffoli(*qs)
    if tag is Tag.CCZ:
        a, b, t = qs
        return _h(t) + _toffoli(a, b, t) + _h(t)
    if tag is Tag.MCX:
        return mcx_exact_ops(qs[:-1], qs[-1])
    raise UnknownGateError(f"no basis expansion for gate {tag!r}")


def simplify(circuit: Circuit) -> Circuit:
    """Peephole clean-up of a basis-gate circuit."""
    out: list[GateOp | None] = []
    last: dict[int, list[int]] = {}

    def top(q):
        stack = last.get(q)
        while stack and out[stack[-1]] is None:
            stack.pop()
        return stack[-1] if stack else None

    for op in circuit.ops:
        if op.tag in ROTATION_TAGS:
            q = op.qubits[0]
            i = top(q)
            if i is not None and out[i].tag is op.tag:
                theta = canonical_angle(out[i].params[0] + op.params[0])
                if abs(theta) < ANGLE_EPS:
                    out[i] = None
                else:
                    out[i] = GateOp(op.tag, (q,), (theta,))
                continue
            theta = canonical_angle(op.params[0])
            if abs(theta) < ANGLE_EPS:
                continue
            op = GateOp(op.tag, (q,), (theta,))
        elif op.tag is Tag.CNOT:
            i, j = top(op.qubits[0]), top(op.qubits[1])
            if i is not None and i == j and out[i] == op:
                out[i] = None
                continue
        out.append(op)
        for q in op.qubits:
            last.setdefault(q, []).append(len(out) - 1)
    return Circuit(circuit.num_qubits, tuple(o for o in out if o is not None), circuit.name,
                   circuit.measured)


def rebase(circuit: Circuit, verify: bool = True) -> tuple[Circuit, DecompositionReport]:
    """Rewrite ``circuit`` into basis gates and report the cost.

    With ``verify`` the dense-unitary oracle measures the deviation from the
    input (up to global phase) for circuits of at most ``ORACLE_MAX_QUBITS``.
    """
    check_valid(circuit)
    expanded: list[GateOp] = []
    for op in circuit.ops:
        expanded += expand(op)
    out = simplify(Circuit(circuit.num_qubits, tuple(expanded), circuit.name, circuit.measured))
    report = DecompositionReport(
        input_counts=circuit.count_ops(),
        cnot_count=out.cnot_count,
        rotation_count=sum(1 for op in out.ops if op.tag in ROTATION_TAGS),
        depth=circuit_depth(out),
    )
    if verify and circuit.num_qubits <= ORACLE_MAX_QUBITS:
        report.max_deviation = phase_aligned_deviation(unitary_of(out), unitary_of(circuit))
    return out, report


def is_basis_only(circuit: Circuit) -> bool:
    return all(op.tag in BASIS_TAGS for op in circuit.ops)
