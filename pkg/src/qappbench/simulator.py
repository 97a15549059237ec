"""Exact statevector execution, output distributions and seeded shot sampling.

Kernels operate on a batched tensor of shape ``(batch, 2, ..., 2)`` where the
axis for qubit ``q`` is ``num_qubits - q`` (qubit 0 is the last axis, i.e. the
least-significant bit of the flattened index). The batch axis lets the noisy
backend push many trajectories through one gate application.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .circuit import Circuit, GateOp, Tag, bitstring, gate_matrix, rz_matrix
from .counts import CountsFile

MAX_SIMULATOR_QUBITS = 24
DROP_BELOW = 1e-15


class SimulationError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Statevector:
    amplitudes: np.ndarray
    num_qubits: int

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2


@dataclass(frozen=True)
class Distribution:
    """Sparse outcome distribution keyed by bitstring (qubit 0 rightmost)."""

    probs: dict[str, float]
    num_qubits: int

    def __post_init__(self):
        for key in self.probs:
            if len(key) != self.num_qubits:
                raise ValueError(f"bitstring {key!r} does not have {self.num_qubits} bits")

    def __getitem__(self, key: str) -> float:
        return self.probs.get(key, 0.0)

    def total(self) -> float:
        return float(sum(self.probs.values()))

    def dense(self) -> np.ndarray:
        out = np.zeros(2 ** self.num_qubits)
        for key, p in self.probs.items():
            out[int(key, 2)] = p
        return out

    def argmax(self) -> str:
        return max(self.probs, key=self.probs.__getitem__)

    @classmethod
    def from_dense(cls, probs: np.ndarray, num_qubits: int, drop_below: float = DROP_BELOW):
        return cls({bitstring(i, num_qubits): float(p)
                    for i, p in enumerate(probs) if p >= drop_below}, num_qubits)

    @classmethod
    def uniform(cls, num_qubits: int) -> "Distribution":
        p = 1.0 / 2 ** num_qubits
        return cls({bitstring(i, num_qubits): p for i in range(2 ** num_qubits)}, num_qubits)

    @classmethod
    def from_counts(cls, counts: CountsFile) -> "Distribution":
        return cls({k: v / counts.shots for k, v in counts.counts.items() if v}, counts.num_qubits)


# Kernels

def _axis(q: int, n: int) -> int:
    return n - q


def _index(n: int, fixed: dict[int, int]) -> tuple:
    idx: list = [slice(None)] * (n + 1)
    for q, v in fixed.items():
        idx[_axis(q, n)] = v
    return tuple(idx)


def apply_controlled_1q(psi: np.ndarray, n: int, m: np.ndarray, target: int,
                        controls: tuple[int, ...] = ()) -> None:
    """Apply ``m`` to ``target`` on the subspace where every control is 1."""
    base = {c: 1 for c in controls}
    i0 = _index(n, {**base, target: 0})
    i1 = _index(n, {**base, target: 1})
    a0 = psi[i0]
    a1 = psi[i1]
    if m[0, 1] == 0 and m[1, 0] == 0:
        if m[0, 0] != 1:
            a0 *= m[0, 0]
        if m[1, 1] != 1:
            a1 *= m[1, 1]
        return
    new0 = m[0, 0] * a0 + m[0, 1] * a1
    new1 = m[1, 0] * a0 + m[1, 1] * a1
    psi[i0] = new0
    psi[i1] = new1


def apply_controlled_x(psi: np.ndarray, n: int, target: int, controls: tuple[int, ...] = ()) -> None:
    base = {c: 1 for c in controls}
    i0 = _index(n, {**base, target: 0})
    i1 = _index(n, {**base, target: 1})
    tmp = psi[i0].copy()
    psi[i0] = psi[i1]
    psi[i1] = tmp


def apply_phase(psi: np.ndarray, n: int, qubits: tuple[int, ...], phase: complex) -> None:
    """Multiply amplitudes where all ``qubits`` are 1 by ``phase``."""
    psi[_index(n, {q: 1 for q in qubits})] *= phase


def apply_swap(psi: np.ndarray, n: int, a: int, b: int) -> None:
    i01 = _index(n, {a: 0, b: 1})
    i10 = _index(n, {a: 1, b: 0})
    tmp = psi[i01].copy()
    psi[i01] = psi[i10]
    psi[i10] = tmp


def apply_op(psi: np.ndarray, n: int, op: GateOp) -> None:
    """Apply ``op`` in place to the batched tensor ``psi``."""
    tag, qs = op.tag, op.qubits
    if tag is Tag.X:
        apply_controlled_x(psi, n, qs[0])
    elif tag in (Tag.CNOT, Tag.CCX, Tag.MCX):
        apply_controlled_x(psi, n, qs[-1], qs[:-1])
    elif tag in (Tag.Z, Tag.CZ, Tag.CCZ):
        apply_phase(psi, n, qs, -1.0)
    elif tag is Tag.S:
        apply_phase(psi, n, qs, 1j)
    elif tag is Tag.T:
        apply_phase(psi, n, qs, np.exp(0.25j * np.pi))
    elif tag is Tag.CP:
        apply_phase(psi, n, qs, np.exp(1j * op.params[0]))
    elif tag is Tag.CRZ:
        apply_controlled_1q(psi, n, rz_matrix(op.params[0]), qs[1], (qs[0],))
    elif tag is Tag.SWAP:
        apply_swap(psi, n, qs[0], qs[1])
    elif len(qs) == 1:
        apply_controlled_1q(psi, n, gate_matrix(op), qs[0])
    else:
        raise SimulationError(f"no kernel for gate {tag.value}")


def zero_state(n: int, batch: int = 1) -> np.ndarray:
    psi = np.zeros((batch,) + (2,) * n, dtype=complex)
    psi[(slice(None),) + (0,) * n] = 1.0
    return psi


def simulate(circuit: Circuit, max_qubits: int = MAX_SIMULATOR_QUBITS,
             check_norm: bool = False) -> Statevector:
    """Statevector obtained by applying ``circuit`` to ``|0...0>``."""
    n = circuit.num_qubits
    if n > max_qubits:
        raise SimulationError(f"simulate is limited to {max_qubits} qubits, got {n}")
    psi = zero_state(n)
    for op in circuit.ops:
        apply_op(psi, n, op)
        if check_norm:
            norm = np.linalg.norm(psi)
            if abs(norm - 1) >= 1e-9:
                raise SimulationError(f"norm drifted to {norm!r} after {op}")
    return Statevector(psi.reshape(-1), n)


def exact_distribution(sv: Statevector) -> Distribution:
    return Distribution.from_dense(sv.probabilities(), sv.num_qubits)


def ideal_distribution(circuit: Circuit) -> Distribution:
    return exact_distribution(simulate(circuit))


def sample_counts(dist: Distribution, shots: int, seed: int | None,
                  backend: str = "ideal") -> CountsFile:
    """Multinomial sample of ``shots`` outcomes from ``dist``."""
    if shots < 1:
        raise ValueError("shots must be at least 1")
    keys = sorted(dist.probs)
    p = np.array([dist.probs[k] for k in keys])
    p = p / p.sum()
    draws = np.random.default_rng(seed).multinomial(shots, p)
    counts = {k: int(c) for k, c in zip(keys, draws) if c}
    return CountsFile(counts=counts, shots=shots, num_qubits=dist.num_qubits,
                      backend=backend, seed=seed)


@dataclass(frozen=True)
class NoiseModel:
    """Stochastic Pauli channel: p1 after 1-qubit gates, p2 after CNOTs, plus readout flips."""

    p1: float = 0.0
    p2: float = 0.0
    readout_flip: float = 0.0

    def __post_init__(self):
        for name in ("p1", "p2", "readout_flip"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name}={value} is outside [0, 1]")

    @property
    def is_noiseless(self) -> bool:
        return self.p1 == 0 and self.p2 == 0 and self.readout_flip == 0


_PAULI_OPS = (None, Tag.X, Tag.Y, Tag.Z)


@dataclass
class _ErrorSite:
    op_index: int
    shots: np.ndarray
    paulis: np.ndarray
    qubits: tuple[int, ...] = field(default_factory=tuple)


def _draw_errors(circuit: Circuit, noise: NoiseModel, shots: int, rng) -> list[_ErrorSite]:
    sites = []
    for i, op in enumerate(circuit.ops):
        if op.tag is Tag.CNOT:
            p, choices = noise.p2, 15
        elif len(op.qubits) == 1 and op.is_basis:
            p, choices = noise.p1, 3
        else:
            raise SimulationError(
                f"run_noisy expects basis gates only, found {op.tag.value}; rebase first")
        if p == 0:
            continue
        hit = np.flatnonzero(rng.random(shots) < p)
        if hit.size:
            sites.append(_ErrorSite(i, hit, rng.integers(1, choices + 1, size=hit.size), op.qubits))
    return sites


def _inject(psi: np.ndarray, n: int, rows: np.ndarray, paulis: np.ndarray, qubits) -> None:
    for code in np.unique(paulis):
        sel = rows[paulis == code]
        sub = psi[sel]
        if len(qubits) == 1:
            factors = [(_PAULI_OPS[code], qubits[0])]
        else:
            factors = [(_PAULI_OPS[code // 4], qubits[0]), (_PAULI_OPS[code % 4], qubits[1])]
        for tag, q in factors:
            if tag is not None:
                apply_op(sub, n, GateOp(tag, (q,)))
        psi[sel] = sub


def run_noisy(circuit: Circuit, noise: NoiseModel, shots: int, seed: int | None,
              max_batch_amplitudes: int = 2 ** 22) -> CountsFile:
    """Monte-Carlo trajectory execution with stochastic Pauli injection and readout flips.

    Every shot is an independent trajectory. Error locations, outcome draws and
    readout flips are drawn up front from one generator seeded by ``seed``, so the
    result does not depend on how the trajectories are batched.
    """
    n = circuit.num_qubits
    if n > MAX_SIMULATOR_QUBITS:
        raise SimulationError(f"run_noisy is limited to {MAX_SIMULATOR_QUBITS} qubits, got {n}")
    rng = np.random.default_rng(seed)
    sites = _draw_errors(circuit, noise, shots, rng)
    uniforms = rng.random(shots)
    flip_mask = np.zeros(shots, dtype=np.int64)
    if noise.readout_flip > 0:
        flips = rng.random((shots, n)) < noise.readout_flip
        flip_mask = (flips * (1 << np.arange(n))).sum(axis=1)

    by_op: dict[int, list[_ErrorSite]] = {}
    for site in sites:
        by_op.setdefault(site.op_index, []).append(site)

    outcomes = np.empty(shots, dtype=np.int64)
    chunk = max(1, max_batch_amplitudes // 2 ** n)
    if not sites:
        # every trajectory is the ideal one
        probs = np.abs(simulate(circuit).amplitudes) ** 2
        cdf = np.cumsum(probs)
        outcomes[:] = np.minimum(np.searchsorted(cdf, uniforms * cdf[-1], side="right"), 2 ** n - 1)
    else:
        for start in range(0, shots, chunk):
            stop = min(shots, start + chunk)
            psi = zero_state(n, stop - start)
            for i, op in enumerate(circuit.ops):
                apply_op(psi, n, op)
                for site in by_op.get(i, ()):
                    mask = (site.shots >= start) & (site.shots < stop)
                    if mask.any():
                        _inject(psi, n, site.shots[mask] - start, site.paulis[mask], site.qubits)
            probs = np.abs(psi.reshape(stop - start, -1)) ** 2
            cdf = np.cumsum(probs, axis=1)
            u = uniforms[start:stop, None] * cdf[:, -1:]
            outcomes[start:stop] = np.minimum((cdf <= u).sum(axis=1), 2 ** n - 1)
    outcomes ^= flip_mask
    tally = np.bincount(outcomes, minlength=2 ** n)
    counts = {bitstring(i, n): int(c) for i, c in enumerate(tally) if c}
    return CountsFile(counts=counts, shots=shots, num_qubits=n, backend="noisy", seed=seed)
