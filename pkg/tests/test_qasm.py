import json
import math
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qappbench.circuit import Circuit, GateOp, Tag, cx, equal_up_to_phase, h, rx, unitary_of
from qappbench.counts import (CountsFile, CountSumMismatchError, MalformedCountsError,
                              MixedLengthError, merge_counts, read_counts, write_counts)
from qappbench.generators import ghz_circuit
from qappbench.qasm import (NonTerminalMeasureError, QasmError, QasmSyntaxError,
                            UnsupportedGateError, emit_qasm2, emit_qasm3, parse_qasm2,
                            qasm3_to_qasm2, tokenize)

from .conftest import circuits

DATA = Path(__file__).parent / "data"
HEADER = 'OPENQASM 2.0;\ninclude "qelib1.inc";\n'


def test_parse_basic_program():
    c = parse_qasm2(HEADER + "qreg q[2]; h q[0]; cx q[0],q[1];")
    assert c.num_qubits == 2
    assert c.ops == (h(0), cx(0, 1))
    assert not c.measured


@pytest.mark.parametrize("expr, value", [
    ("pi/2", math.pi / 2),
    ("-pi", -math.pi),
    ("2*(pi+1)/4", 2 * (math.pi + 1) / 4),
    ("--1.5e-1", 0.15),
    ("pi - 3*.5", math.pi - 1.5),
    ("1/3*3", 1.0),
])
def test_angle_expressions(expr, value):
    c = parse_qasm2(HEADER + f"qreg q[1]; rx({expr}) q[0];")
    assert c.ops[0].params[0] == pytest.approx(value, abs=1e-15)


def test_unknown_gate_is_named():
    with pytest.raises(UnsupportedGateError) as err:
        parse_qasm2(HEADER + "qreg q[1];\nmygate q[0];")
    assert err.value.gate == "mygate"
    assert (err.value.line, err.value.column) == (4, 1)


def test_syntax_error_has_position():
    with pytest.raises(QasmSyntaxError) as err:
        parse_qasm2(HEADER + "qreg q[2];\nh q[0]\ncx q[0],q[1];")
    assert err.value.line == 5 and err.value.column == 1


def test_gate_after_measure_rejected():
    text = HEADER + "qreg q[2]; creg c[2]; h q[0]; measure q -> c; x q[1];"
    with pytest.raises(NonTerminalMeasureError):
        parse_qasm2(text)


def test_per_qubit_measure_and_barrier():
    text = HEADER + ("qreg q[2]; creg c[2]; h q[0]; barrier q; cx q[0],q[1];"
                     "measure q[0] -> c[0]; measure q[1] -> c[1]; barrier q[0];")
    c = parse_qasm2(text)
    assert c.measured and c.ops == (h(0), cx(0, 1))


def test_register_broadcast_for_single_qubit_gates():
    assert parse_qasm2(HEADER + "qreg q[3]; h q;").ops == (h(0), h(1), h(2))


def test_cu1_alias():
    c = parse_qasm2(HEADER + "qreg q[2]; cu1(pi/4) q[0],q[1];")
    assert c.ops == (GateOp(Tag.CP, (0, 1), (math.pi / 4,)),)


@pytest.mark.parametrize("body", [
    "qreg q[2]; cx q[0],q[2];",
    "qreg q[2]; cx q[1],q[1];",
    "qreg q[2]; rx q[0];",
    "qreg q[2]; h(0.1) q[0];",
    "qreg q[2]; cx q[0];",
    "qreg q[2]; qreg r[2];",
    "qreg q[2]; rx(1/0) q[0];",
    "qreg q[2]; h r[0];",
    "qreg q[0];",
    "h q[0];",
])
def test_semantic_errors_are_positioned(body):
    with pytest.raises(QasmError) as err:
        parse_qasm2(HEADER + body)
    assert err.value.line is not None


def test_missing_or_wrong_header():
    with pytest.raises(QasmSyntaxError):
        parse_qasm2("qreg q[1];")
    with pytest.raises(QasmSyntaxError):
        parse_qasm2("OPENQASM 3.0; qreg q[1];")


def test_emit_rx_pi():
    text = emit_qasm2(Circuit(1, (rx(0, math.pi),)))
    assert "rx(3.1415926535897931) q[0];" in text


def test_ghz3_golden_file():
    assert emit_qasm2(ghz_circuit(3)) == (DATA / "ghz3.qasm").read_text()


def test_qasm3_header_contract():
    text = emit_qasm3(ghz_circuit(3))
    assert text.startswith("OPENQASM 3")
    assert "qubit[3] q;" in text and "c = measure q;" in text


def test_qasm3_empty_circuit_has_only_declarations():
    lines = emit_qasm3(Circuit(1, ())).strip().splitlines()
    assert lines == ["OPENQASM 3.0;", 'include "stdgates.inc";', "qubit[1] q;"]


def test_whitespace_and_comments_do_not_change_meaning():
    plain = HEADER + "qreg q[2]; h q[0]; cx q[0],q[1]; rz(pi/3) q[1];"
    noisy = ("// leading comment\nOPENQASM   2.0 ;\n\ninclude \"qelib1.inc\";  // lib\n"
             "qreg q [ 2 ] ;\n\th q[0];   // hadamard\ncx q[0] ,\n q[1];\nrz( pi / 3 ) q[1];\n")
    assert np.allclose(unitary_of(parse_qasm2(plain)), unitary_of(parse_qasm2(noisy)))


@settings(max_examples=80, deadline=None)
@given(circuits(max_qubits=5, max_ops=15))
def test_round_trip(c):
    back = parse_qasm2(emit_qasm2(c))
    assert back.num_qubits == c.num_qubits and back.measured == c.measured
    assert len(back.ops) == len(c.ops)
    for a, b in zip(back.ops, c.ops):
        assert a.tag is b.tag and a.qubits == b.qubits
        assert np.allclose(a.params, b.params, rtol=0, atol=1e-12)


@settings(max_examples=40, deadline=None)
@given(circuits(max_qubits=4, max_ops=10))
def test_qasm3_rewrite_round_trip(c):
    back = parse_qasm2(qasm3_to_qasm2(emit_qasm3(c)))
    assert back.ops == c.ops and back.measured == c.measured


@settings(max_examples=300, deadline=None)
@given(st.text(alphabet=st.sampled_from(list("OPENQASM2.0;qreg[]()hcx,pi/*+-0123456789 \n\"->measure")),
               max_size=80))
def test_parser_never_crashes_on_token_soup(text):
    try:
        parse_qasm2(text)
    except QasmError:
        pass


@settings(max_examples=200, deadline=None)
@given(st.text(max_size=60))
def test_parser_never_crashes_after_valid_prefix(tail):
    try:
        parse_qasm2(HEADER + "qreg q[3]; creg c[3];\n" + tail)
    except QasmError as err:
        assert err.line is not None


def test_tokenizer_columns():
    toks = tokenize("qreg q[2];\n  h q[0];")
    h_tok = [t for t in toks if t.text == "h"][0]
    assert (h_tok.line, h_tok.column) == (2, 3)


def test_exported_circuits_stay_equivalent():
    c = Circuit(3, (h(0), cx(0, 1), GateOp(Tag.CCZ, (0, 1, 2)), GateOp(Tag.MCX, (0, 2, 1))))
    back = parse_qasm2(emit_qasm2(c))
    assert equal_up_to_phase(unitary_of(back), unitary_of(c))


# Counts files

def test_counts_valid(tmp_path):
    path = tmp_path / "c.json"
    path.write_text(json.dumps({"shots": 1000, "counts": {"000": 500, "111": 500}}))
    cf = read_counts(path)
    assert cf.num_qubits == 3 and cf.shots == 1000 and cf.backend == "unknown"


def test_counts_sum_mismatch(tmp_path):
    path = tmp_path / "c.json"
    path.write_text(json.dumps({"shots": 1000, "counts": {"0": 500, "1": 499}}))
    with pytest.raises(CountSumMismatchError):
        read_counts(path)


def test_counts_mixed_lengths(tmp_path):
    path = tmp_path / "c.json"
    path.write_text(json.dumps({"shots": 2, "counts": {"00": 1, "000": 1}}))
    with pytest.raises(MixedLengthError):
        read_counts(path)


@pytest.mark.parametrize("payload", [
    "not json",
    json.dumps([1, 2]),
    json.dumps({"shots": 10, "counts": {}}),
    json.dumps({"shots": "10", "counts": {"0": 10}}),
    json.dumps({"shots": 10, "counts": {"0a": 10}}),
    json.dumps({"shots": 10, "counts": {"0": -1, "1": 11}}),
    json.dumps({"shots": 10, "counts": {"0": 10}, "metadata": {"wall_time_s": "x"}}),
])
def test_counts_malformed(tmp_path, payload):
    path = tmp_path / "c.json"
    path.write_text(payload)
    with pytest.raises(MalformedCountsError):
        read_counts(path)


def test_counts_round_trip(tmp_path):
    cf = CountsFile({"01": 600, "10": 400}, 1000, 2, backend="dev", seed=7, wall_time_s=1.25)
    path = tmp_path / "c.json"
    write_counts(cf, path)
    assert read_counts(path) == cf
    data = json.loads(path.read_text())
    assert data["metadata"] == {"backend": "dev", "seed": 7, "wall_time_s": 1.25}


def test_merge_counts():
    a = CountsFile({"0": 3, "1": 1}, 4, 1)
    b = CountsFile({"1": 2}, 2, 1)
    assert merge_counts(a, b).counts == {"0": 3, "1": 3}
