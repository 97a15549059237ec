"""Inverse-QFT benchmark: Fourier-basis encoding of an integer, then QFT^-1."""
from __future__ import annotations

import numpy as np

from ..circuit import Circuit, GateOp, cp, h, inverse, rz, swap


def qft_ops(n: int) -> list[GateOp]:
    """QFT on n qubits, qubit 0 least significant, including the final reversal."""
    ops: list[GateOp] = []
    for j in reversed(range(n)):
        ops.append(h(j))
        for k in reversed(range(j)):
            ops.append(cp(k, j, np.pi / 2 ** (j - k)))
    ops += [swap(i, n - 1 - i) for i in range(n // 2)]
    return ops


def fourier_encoding_ops(n: int, value: int) -> list[GateOp]:
    """One-qubit gates preparing QFT|value> up to global phase."""
    ops: list[GateOp] = []
    for q in range(n):
        ops.append(h(q))
        ops.append(rz(q, 2 * np.pi * value * 2 ** q / 2 ** n))
    return ops


def iqft_benchmark_circuit(n: int, x: int) -> Circuit:
    if n < 1:
        raise ValueError("n must be positive")
    if not 0 <= x < 2 ** n:
        raise ValueError(f"x={x} outside [0, {2 ** n})")
    ops = fourier_encoding_ops(n, x) + inverse(qft_ops(n))
    return Circuit(n, tuple(ops), f"iqft_n{n}_x{x}", measured=True)
