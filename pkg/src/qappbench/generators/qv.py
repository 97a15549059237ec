"""Square Haar-random model circuits for quantum volume."""
from __future__ import annotations

import numpy as np

from ..circuit import Circuit, GateOp
from ..transpiler.kak import haar_random_su4, kak_decompose


def qv_circuit(m: int, seed: int, depth: int | None = None,
               unitary_seed: int | None = None) -> Circuit:
    """``depth`` (default ``m``) layers of random pairings, each pair a Haar SU(4) block.

    ``seed`` fixes the pairings and, unless ``unitary_seed`` is given, the
    two-qubit unitaries too. Passing ``unitary_seed`` keeps the pairing
    structure and redraws only the unitaries (a parameter update of a template).
    """
    if m < 2:
        raise ValueError(f"quantum volume circuits need m >= 2, got {m}")
    depth = m if depth is None else depth
    if depth < 1:
        raise ValueError(f"depth must be positive, got {depth}")
    # independent streams so redrawing the unitaries leaves the pairings alone
    perm_seq, unit_seq = np.random.SeedSequence(seed).spawn(2)
    rng = np.random.default_rng(perm_seq)
    urng = np.random.default_rng(unit_seq if unitary_seed is None else unitary_seed)
    ops: list[GateOp] = []
    for _ in range(depth):
        perm = rng.permutation(m)
        seeds = urng.integers(0, 2 ** 63, size=m // 2)
        for k in range(m // 2):
            a, b = int(perm[2 * k]), int(perm[2 * k + 1])
            block = kak_decompose(haar_random_su4(int(seeds[k])), qubits=(a, b), num_qubits=m)
            ops.extend(block.ops)
    suffix = "" if unitary_seed is None else f"_u{unitary_seed}"
    return Circuit(m, tuple(ops), f"qv_m{m}_d{depth}_s{seed}{suffix}", measured=True)
