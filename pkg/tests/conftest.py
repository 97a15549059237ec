import numpy as np
import pytest
from hypothesis import strategies as st

from qappbench.circuit import Circuit, GateOp, Tag, arity, num_params

ACCEPTANCE_LINES: list[str] = []

FIXED_ARITY_TAGS = [t for t in Tag if arity(t) is not None]


@st.composite
def gate_ops(draw, num_qubits: int, tags=None):
    tags = tags or [t for t in FIXED_ARITY_TAGS if arity(t) <= num_qubits]
    if num_qubits >= 3:
        tags = tags + [Tag.MCX]
    tag = draw(st.sampled_from(tags))
    k = arity(tag) if tag is not Tag.MCX else draw(st.integers(2, num_qubits))
    qubits = draw(st.permutations(range(num_qubits)))[:k]
    params = tuple(draw(st.floats(-7, 7, allow_nan=False)) for _ in range(num_params(tag)))
    return GateOp(tag, tuple(qubits), params)


@st.composite
def circuits(draw, min_qubits=1, max_qubits=4, max_ops=12, tags=None):
    n = draw(st.integers(min_qubits, max_qubits))
    ops = draw(st.lists(gate_ops(n, tags), max_size=max_ops))
    return Circuit(n, tuple(ops), "random", measured=draw(st.booleans()))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
