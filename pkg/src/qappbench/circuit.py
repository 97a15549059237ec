"""Circuit representation, validation, ASAP layering and a dense unitary oracle.

Conventions used throughout the package:

* ``RX(t) = exp(-i t X / 2)`` and likewise for ``RY``/``RZ``.
* Qubit 0 is the least-significant bit of an outcome index; printed
  bitstrings carry qubit 0 rightmost.
* For a gate acting on ``qubits = (q0, q1, ...)`` the local matrix is
  written with ``q0`` as the most-significant local bit, so the textbook
  CNOT matrix corresponds to ``cx(control, target)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Iterable, Sequence

import numpy as np


class Tag(str, Enum):
    RX = "rx"
    RY = "ry"
    RZ = "rz"
    CNOT = "cx"
    H = "h"
    X = "x"
    Y = "y"
    Z = "z"
    S = "s"
    T = "t"
    CZ = "cz"
    CCZ = "ccz"
    CCX = "ccx"
    MCX = "mcx"
    SWAP = "swap"
    CRZ = "crz"
    CP = "cp"


BASIS_TAGS = frozenset({Tag.RX, Tag.RY, Tag.RZ, Tag.CNOT})
ROTATION_TAGS = frozenset({Tag.RX, Tag.RY, Tag.RZ})

_ARITY = {
    Tag.RX: 1, Tag.RY: 1, Tag.RZ: 1, Tag.H: 1, Tag.X: 1, Tag.Y: 1, Tag.Z: 1,
    Tag.S: 1, Tag.T: 1,
    Tag.CNOT: 2, Tag.CZ: 2, Tag.SWAP: 2, Tag.CRZ: 2, Tag.CP: 2,
    Tag.CCZ: 3, Tag.CCX: 3,
}
_NUM_PARAMS = {Tag.RX: 1, Tag.RY: 1, Tag.RZ: 1, Tag.CRZ: 1, Tag.CP: 1}


def arity(tag: Tag) -> int | None:
    """Fixed qubit count of ``tag``; ``None`` for MCX, whose arity is k+1."""
    return _ARITY.get(tag)


def num_params(tag: Tag) -> int:
    return _NUM_PARAMS.get(tag, 0)


@dataclass(frozen=True)
class GateOp:
    tag: Tag
    qubits: tuple[int, ...]
    params: tuple[float, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "tag", Tag(self.tag))
        object.__setattr__(self, "qubits", tuple(int(q) for q in self.qubits))
        object.__setattr__(self, "params", tuple(float(p) for p in self.params))

    @property
    def is_basis(self) -> bool:
        return self.tag in BASIS_TAGS

    def __str__(self):
        args = f"({', '.join(f'{p:.6g}' for p in self.params)})" if self.params else ""
        return f"{self.tag.value}{args} {','.join(map(str, self.qubits))}"


@dataclass(frozen=True)
class Circuit:
    num_qubits: int
    ops: tuple[GateOp, ...] = ()
    name: str = ""
    measured: bool = False

    def __post_init__(self):
        object.__setattr__(self, "ops", tuple(self.ops))

    def __len__(self):
        return len(self.ops)

    def __iter__(self):
        return iter(self.ops)

    def append(self, *ops: GateOp) -> "Circuit":
        return replace(self, ops=self.ops + tuple(ops))

    def compose(self, other: "Circuit") -> "Circuit":
        if other.num_qubits > self.num_qubits:
            raise ValueError("cannot compose a wider circuit onto a narrower one")
        return replace(self, ops=self.ops + other.ops, measured=self.measured or other.measured)

    def with_measurement(self, measured: bool = True) -> "Circuit":
        return replace(self, measured=measured)

    def renamed(self, name: str) -> "Circuit":
        return replace(self, name=name)

    def count_ops(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for op in self.ops:
            counts[op.tag.value] = counts.get(op.tag.value, 0) + 1
        return counts

    @property
    def cnot_count(self) -> int:
        return sum(1 for op in self.ops if op.tag is Tag.CNOT)


# Gate constructors. Angles are radians.

def rx(q: int, theta: float) -> GateOp:
    return GateOp(Tag.RX, (q,), (theta,))


def ry(q: int, theta: float) -> GateOp:
    return GateOp(Tag.RY, (q,), (theta,))


def rz(q: int, theta: float) -> GateOp:
    return GateOp(Tag.RZ, (q,), (theta,))


def cx(control: int, target: int) -> GateOp:
    return GateOp(Tag.CNOT, (control, target))


def h(q: int) -> GateOp:
    return GateOp(Tag.H, (q,))


def x(q: int) -> GateOp:
    return GateOp(Tag.X, (q,))


def y(q: int) -> GateOp:
    return GateOp(Tag.Y, (q,))


def z(q: int) -> GateOp:
    return GateOp(Tag.Z, (q,))


def s(q: int) -> GateOp:
    return GateOp(Tag.S, (q,))


def t(q: int) -> GateOp:
    return GateOp(Tag.T, (q,))


def cz(a: int, b: int) -> GateOp:
    return GateOp(Tag.CZ, (a, b))


def ccz(a: int, b: int, c: int) -> GateOp:
    return GateOp(Tag.CCZ, (a, b, c))


def ccx(a: int, b: int, target: int) -> GateOp:
    return GateOp(Tag.CCX, (a, b, target))


def mcx(controls: Sequence[int], target: int) -> GateOp:
    return GateOp(Tag.MCX, (*controls, target))


def swap(a: int, b: int) -> GateOp:
    return GateOp(Tag.SWAP, (a, b))


def crz(control: int, target: int, theta: float) -> GateOp:
    return GateOp(Tag.CRZ, (control, target), (theta,))


def cp(control: int, target: int, theta: float) -> GateOp:
    return GateOp(Tag.CP, (control, target), (theta,))


# Validation and depth

def validate(circuit: Circuit) -> list[str]:
    """Return every invariant violation of ``circuit``; an empty list means valid."""
    problems = []
    if circuit.num_qubits < 1:
        problems.append(f"width {circuit.num_qubits} is not positive")
    for i, op in enumerate(circuit.ops):
        expected = arity(op.tag)
        if expected is None:
            if len(op.qubits) < 2:
                problems.append(f"op {i} ({op.tag.value}): mcx needs at least one control")
        elif len(op.qubits) != expected:
            problems.append(
                f"op {i} ({op.tag.value}): wrong arity {len(op.qubits)}, expected {expected}"
            )
        if len(op.params) != num_params(op.tag):
            problems.append(
                f"op {i} ({op.tag.value}): expected {num_params(op.tag)} params, got {len(op.params)}"
            )
        for q in op.qubits:
            if q < 0 or q >= circuit.num_qubits:
                problems.append(f"op {i} ({op.tag.value}): index {q} ≥ width {circuit.num_qubits}"
                                if q >= 0 else f"op {i} ({op.tag.value}): negative index {q}")
        if len(set(op.qubits)) != len(op.qubits):
            problems.append(f"op {i} ({op.tag.value}): repeated qubit in {op.qubits}")
    return problems


class InvalidCircuitError(ValueError):
    pass


def check_valid(circuit: Circuit) -> Circuit:
    problems = validate(circuit)
    if problems:
        raise InvalidCircuitError("; ".join(problems))
    return circuit


@dataclass(frozen=True)
class LayerSchedule:
    layers: tuple[tuple[int, ...], ...] = field(default_factory=tuple)

    @property
    def depth(self) -> int:
        return len(self.layers)


def layer_schedule(circuit: Circuit) -> LayerSchedule:
    """Greedy as-soon-as-possible layering of ``circuit.ops``."""
    frontier: dict[int, int] = {}
    layers: list[list[int]] = []
    for i, op in enumerate(circuit.ops):
        level = max((frontier.get(q, -1) for q in op.qubits), default=-1) + 1
        if level == len(layers):
            layers.append([])
        layers[level].append(i)
        for q in op.qubits:
            frontier[q] = level
    return LayerSchedule(tuple(tuple(layer) for layer in layers))


def circuit_depth(circuit: Circuit) -> int:
    return layer_schedule(circuit).depth


# Dense matrices

_SQ2 = 1 / np.sqrt(2)


def rx_matrix(theta: float) -> np.ndarray:
    c, s_ = np.cos(theta / 2), np.sin(theta / 2)
    return np.array([[c, -1j * s_], [-1j * s_, c]], dtype=complex)


def ry_matrix(theta: float) -> np.ndarray:
    c, s_ = np.cos(theta / 2), np.sin(theta / 2)
    return np.array([[c, -s_], [s_, c]], dtype=complex)


def rz_matrix(theta: float) -> np.ndarray:
    return np.diag([np.exp(-0.5j * theta), np.exp(0.5j * theta)])


_FIXED_1Q = {
    Tag.H: np.array([[_SQ2, _SQ2], [_SQ2, -_SQ2]], dtype=complex),
    Tag.X: np.array([[0, 1], [1, 0]], dtype=complex),
    Tag.Y: np.array([[0, -1j], [1j, 0]], dtype=complex),
    Tag.Z: np.diag([1, -1]).astype(complex),
    Tag.S: np.diag([1, 1j]),
    Tag.T: np.diag([1, np.exp(0.25j * np.pi)]),
}


def _controlled(u: np.ndarray, num_controls: int) -> np.ndarray:
    dim = 2 ** num_controls * u.shape[0]
    m = np.eye(dim, dtype=complex)
    m[-u.shape[0]:, -u.shape[0]:] = u
    return m


def gate_matrix(op: GateOp) -> np.ndarray:
    """Local matrix of ``op``; ``op.qubits[0]`` is the most-significant local bit."""
    tag = op.tag
    if tag in _FIXED_1Q:
        return _FIXED_1Q[tag].copy()
    if tag is Tag.RX:
        return rx_matrix(op.params[0])
    if tag is Tag.RY:
        return ry_matrix(op.params[0])
    if tag is Tag.RZ:
        return rz_matrix(op.params[0])
    if tag is Tag.CNOT:
        return _controlled(_FIXED_1Q[Tag.X], 1)
    if tag is Tag.CZ:
        return _controlled(_FIXED_1Q[Tag.Z], 1)
    if tag is Tag.CCX:
        return _controlled(_FIXED_1Q[Tag.X], 2)
    if tag is Tag.CCZ:
        return _controlled(_FIXED_1Q[Tag.Z], 2)
    if tag is Tag.MCX:
        return _controlled(_FIXED_1Q[Tag.X], len(op.qubits) - 1)
    if tag is Tag.CRZ:
        return _controlled(rz_matrix(op.params[0]), 1)
    if tag is Tag.CP:
        return _controlled(np.diag([1, np.exp(1j * op.params[0])]), 1)
    if tag is Tag.SWAP:
        return np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex)
    raise ValueError(f"no matrix for gate {tag.value}")


MAX_UNITARY_QUBITS = 12


class WidthExceededError(ValueError):
    pass


def embed(op: GateOp, num_qubits: int) -> np.ndarray:
    """Full ``2^n x 2^n`` matrix of ``op`` built by explicit index arithmetic."""
    local = gate_matrix(op)
    k = len(op.qubits)
    dim = 2 ** num_qubits
    cols = np.arange(dim)
    local_in = np.zeros(dim, dtype=np.int64)
    rest = cols.copy()
    for j, q in enumerate(op.qubits):
        bit = (cols >> q) & 1
        local_in |= bit << (k - 1 - j)
        rest &= ~(1 << q)
    full = np.zeros((dim, dim), dtype=complex)
    for r in range(2 ** k):
        rows = rest.copy()
        for j, q in enumerate(op.qubits):
            if (r >> (k - 1 - j)) & 1:
                rows |= 1 << q
        full[rows, cols] = local[r, local_in]
    return full


def unitary_of(circuit: Circuit) -> np.ndarray:
    """Product of the embedded gate matrices in application order."""
    n = circuit.num_qubits
    if n > MAX_UNITARY_QUBITS:
        raise WidthExceededError(f"unitary_of is limited to {MAX_UNITARY_QUBITS} qubits, got {n}")
    u = np.eye(2 ** n, dtype=complex)
    for op in circuit.ops:
        u = embed(op, n) @ u
    return u


def phase_aligned_deviation(u: np.ndarray, v: np.ndarray) -> float:
    """Max elementwise ``|u - e^{ia} v|`` for the best global phase ``a``."""
    overlap = np.vdot(v, u)
    phase = overlap / abs(overlap) if abs(overlap) > 1e-300 else 1.0
    return float(np.max(np.abs(u - phase * v)))


def equal_up_to_phase(u: np.ndarray, v: np.ndarray, atol: float = 1e-8) -> bool:
    return u.shape == v.shape and phase_aligned_deviation(u, v) <= atol


def bitstring(index: int, num_qubits: int) -> str:
    return format(index, f"0{num_qubits}b")


def remap(circuit: Circuit, mapping: dict[int, int] | Sequence[int], num_qubits: int | None = None,
          name: str | None = None) -> Circuit:
    """Relabel qubits of ``circuit`` through ``mapping`` (old index -> new index)."""
    ops = [GateOp(op.tag, tuple(mapping[q] for q in op.qubits), op.params) for op in circuit.ops]
    return Circuit(num_qubits or circuit.num_qubits, tuple(ops),
                   circuit.name if name is None else name, circuit.measured)


def inverse(ops: Iterable[GateOp]) -> list[GateOp]:
    """Inverse of ``ops`` up to global phase (S and T invert to RZ rotations)."""
    out = []
    for op in reversed(list(ops)):
        if op.tag in (Tag.RX, Tag.RY, Tag.RZ, Tag.CRZ, Tag.CP):
            out.append(GateOp(op.tag, op.qubits, (-op.params[0],)))
        elif op.tag in (Tag.S, Tag.T):
            out.append(rz(op.qubits[0], -np.pi / (2 if op.tag is Tag.S else 4)))
        else:
            out.append(op)
    return out
