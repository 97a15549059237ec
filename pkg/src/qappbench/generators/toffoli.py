"""Truth-table suite for the n-qubit Toffoli benchmark.

Qubit 0 is the target and qubits 1..n-1 are controls, so with qubit 0 printed
rightmost the input ``11110`` maps to ``11111``.
"""
from __future__ import annotations

from ..circuit import Circuit, bitstring, x
from ..transpiler.mcx import toffoli_approx, toffoli_exact

DEFINED_INSTANCES = {5: False, 6: True}


def toffoli_expected_output(inp: str) -> str:
    if set(inp[:-1]) == {"1"}:
        return inp[:-1] + ("0" if inp[-1] == "1" else "1")
    return inp


def toffoli_truthtable_suite(n: int, approximate: bool | None = None) -> list[tuple[str, Circuit]]:
    """One circuit per basis input: X preparation, Toffoli network, measurement."""
    if not 3 <= n <= 6:
        raise ValueError(f"Toffoli suite width must be in [3, 6], got {n}")
    if approximate is None:
        approximate = DEFINED_INSTANCES.get(n, False)
    if n in DEFINED_INSTANCES and approximate != DEFINED_INSTANCES[n]:
        kind = "approximate" if DEFINED_INSTANCES[n] else "exact"
        raise ValueError(f"the {n}-qubit Toffoli instance is defined as {kind}")
    core = toffoli_approx(n) if approximate else toffoli_exact(n)
    tag = "approx" if approximate else "exact"
    suite = []
    for i in range(2 ** n):
        inp = bitstring(i, n)
        prep = tuple(x(q) for q in range(n) if (i >> q) & 1)
        suite.append((inp, Circuit(n, prep + core.ops, f"toffoli_n{n}_{tag}_in{inp}", measured=True)))
    return suite
