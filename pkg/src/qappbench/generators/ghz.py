"""GHZ state preparation and the parity-oscillation analysis circuits."""
from __future__ import annotations

import numpy as np

from ..circuit import Circuit, cx, h, rx, rz


def ghz_circuit(N: int) -> Circuit:
    """H on qubit 0 followed by the CNOT chain 0->1->...->N-1."""
    if N < 2:
        raise ValueError(f"GHZ needs at least 2 qubits, got {N}")
    ops = [h(0)] + [cx(i, i + 1) for i in range(N - 1)]
    return Circuit(N, tuple(ops), f"ghz_n{N}", measured=True)


def parity_phases(N: int) -> list[float]:
    """The 2N+2 analysis phases k*pi/(N+1)."""
    return [k * np.pi / (N + 1) for k in range(2 * N + 2)]


def analysis_rotation(q: int, phi: float):
    """pi/2 rotation about the equatorial axis (cos phi, sin phi, 0)."""
    return [rz(q, -phi), rx(q, np.pi / 2), rz(q, phi)]


def ghz_parity_circuits(N: int) -> list[tuple[float, Circuit]]:
    base = ghz_circuit(N)
    out = []
    for k, phi in enumerate(parity_phases(N)):
        ops = list(base.ops)
        for q in range(N):
            ops += analysis_rotation(q, phi)
        out.append((phi, Circuit(N, tuple(ops), f"ghz_n{N}_parity{k}", measured=True)))
    return out
