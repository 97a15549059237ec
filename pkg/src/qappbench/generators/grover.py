"""Three-qubit Grover search with CCZ-based oracle and diffusion."""
from __future__ import annotations

from ..circuit import Circuit, ccz, h, x

DEFAULT_MARKED = "111"
DEFAULT_ITERATIONS = 2


def grover3_circuit(marked: str = DEFAULT_MARKED, iterations: int = DEFAULT_ITERATIONS) -> Circuit:
    if len(marked) != 3 or set(marked) - {"0", "1"}:
        raise ValueError(f"marked must be a 3-bit string, got {marked!r}")
    if iterations < 1:
        raise ValueError("iterations must be at least 1")
    zeros = [q for q in range(3) if marked[2 - q] == "0"]
    ops = [h(q) for q in range(3)]
    for _ in range(iterations):
        ops += [x(q) for q in zeros] + [ccz(0, 1, 2)] + [x(q) for q in zeros]
        ops += [h(q) for q in range(3)] + [x(q) for q in range(3)] + [ccz(0, 1, 2)]
        ops += [x(q) for q in range(3)] + [h(q) for q in range(3)]
    return Circuit(3, tuple(ops), f"grover3_m{marked}_i{iterations}", measured=True)
