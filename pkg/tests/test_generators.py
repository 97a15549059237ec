import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import expm

from qappbench.circuit import Circuit, circuit_depth, equal_up_to_phase, unitary_of
from qappbench.generators import (REFERENCE_INSTANCE, AnsatzSpec, InfeasibleHorizonError,
                                  JsspInstance, PauliTerm, QaoaParams, Qubo, default_qaoa_params,
                                  ghz_circuit, ghz_parity_circuits, grover3_circuit,
                                  ingest_features, iqft_benchmark_circuit, jssp_to_qubo,
                                  load_ansatz_spec, optimal_makespan, parity_phases, qaoa_circuit,
                                  qsvm_featuremap_circuit, qv_circuit, toffoli_expected_output,
                                  toffoli_truthtable_suite, vqe_ansatz_circuit)
from qappbench.generators.qaoa import (CLAIMED_MAKESPAN, decode_schedule,
                                       one_start_satisfied, schedule_is_feasible)
from qappbench.generators.qsvm import FeatureFileError, entangling_pairs
from qappbench.generators.vqe import AnsatzSpecError
from qappbench.metrics import hellinger_fidelity, parity
from qappbench.simulator import Distribution, ideal_distribution, simulate
from qappbench.transpiler import rebase

UNIFORM8 = Distribution({format(i, "08b"): 1 / 256 for i in range(256)}, 8)


# GHZ

@pytest.mark.parametrize("N", [2, 3, 7, 10])
def test_ghz_distribution(N):
    probs = ideal_distribution(ghz_circuit(N)).probs
    assert probs == pytest.approx({"0" * N: 0.5, "1" * N: 0.5})


def test_ghz_shape():
    c = ghz_circuit(5)
    assert c.cnot_count == 4 and circuit_depth(c) == 5 and c.measured
    with pytest.raises(ValueError):
        ghz_circuit(1)


@pytest.mark.parametrize("N", [2, 3, 5])
def test_ghz_parity_oscillates(N):
    # ideal parity is a unit-amplitude sinusoid cos(N phi + offset)
    circuits = ghz_parity_circuits(N)
    assert len(circuits) == 2 * N + 2
    phis = np.array([phi for phi, _ in circuits])
    values = np.array([parity(ideal_distribution(c)) for _, c in circuits])
    basis = np.stack([np.cos(N * phis), np.sin(N * phis)], axis=1)
    coef, *_ = np.linalg.lstsq(basis, values, rcond=None)
    assert np.allclose(basis @ coef, values, atol=1e-9)
    assert np.hypot(*coef) == pytest.approx(1, abs=1e-9)


def test_parity_phases():
    assert parity_phases(3) == pytest.approx([k * np.pi / 4 for k in range(8)])


# Toffoli suite

@pytest.mark.parametrize("inp, out", [
    ("11110", "11111"), ("11111", "11110"), ("01110", "01110"), ("00000", "00000"), ("110", "111"),
])
def test_toffoli_expected_output(inp, out):
    assert toffoli_expected_output(inp) == out


@pytest.mark.parametrize("n, approximate", [(3, False), (4, True), (5, None), (6, None)])
def test_toffoli_suite_is_deterministic_truth_table(n, approximate):
    suite = toffoli_truthtable_suite(n, approximate)
    assert len(suite) == 2 ** n
    for inp, c in suite:
        probs = ideal_distribution(c).probs
        assert probs[toffoli_expected_output(inp)] == pytest.approx(1, abs=1e-9)


def test_toffoli_suite_instance_kinds():
    assert "exact" in toffoli_truthtable_suite(5)[0][1].name
    assert "approx" in toffoli_truthtable_suite(6)[0][1].name
    with pytest.raises(ValueError):
        toffoli_truthtable_suite(5, approximate=True)
    with pytest.raises(ValueError):
        toffoli_truthtable_suite(7)


# Grover

def test_grover_finds_marked_state():
    probs = ideal_distribution(grover3_circuit()).probs
    assert probs["111"] == pytest.approx(0.9453125, abs=1e-9)  # sin^2(5 asin(1/sqrt 8))


@pytest.mark.parametrize("marked", ["000", "101", "010", "110"])
def test_grover_other_marks(marked):
    probs = ideal_distribution(grover3_circuit(marked)).probs
    assert max(probs, key=probs.get) == marked


def test_grover_validation():
    with pytest.raises(ValueError):
        grover3_circuit("11")
    with pytest.raises(ValueError):
        grover3_circuit("111", iterations=0)


# Inverse QFT

@pytest.mark.parametrize("n, x", [(1, 1), (3, 5), (5, 21), (5, 0), (6, 63)])
def test_iqft_recovers_integer(n, x):
    probs = ideal_distribution(iqft_benchmark_circuit(n, x)).probs
    assert probs[format(x, f"0{n}b")] == pytest.approx(1, abs=1e-9)


def test_iqft_range():
    with pytest.raises(ValueError):
        iqft_benchmark_circuit(3, 8)


# VQE ansatz

def _ansatz_oracle(spec: AnsatzSpec) -> np.ndarray:
    n = spec.num_qubits
    state = np.zeros(2 ** n, dtype=complex)
    state[int(spec.hf_occupation, 2)] = 1
    for label, theta in spec.terms:
        state = expm(-0.5j * theta * PauliTerm.from_label(label).matrix(n)) @ state
    return state


def test_bundled_ansatz_matches_matrix_exponentials():
    spec = load_ansatz_spec()
    amps = simulate(vqe_ansatz_circuit(spec)).amplitudes
    ref = _ansatz_oracle(spec)
    assert abs(abs(np.vdot(ref, amps)) - 1) < 1e-10


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.text("IXYZ", min_size=3, max_size=3),
                          st.floats(-np.pi, np.pi)), max_size=4),
       st.text("01", min_size=3, max_size=3))
def test_ansatz_matches_oracle(terms, occ):
    spec = AnsatzSpec(occ, tuple(terms))
    amps = simulate(vqe_ansatz_circuit(spec)).amplitudes
    assert abs(abs(np.vdot(_ansatz_oracle(spec), amps)) - 1) < 1e-9


def test_ansatz_with_no_terms_is_reference_state():
    probs = ideal_distribution(vqe_ansatz_circuit(AnsatzSpec("011", ()))).probs
    assert probs == pytest.approx({"011": 1.0})


def test_ansatz_zero_angles_is_reference_state():
    spec = AnsatzSpec("011", (("XYX", 0.0), ("IXY", 0.0)))
    assert ideal_distribution(vqe_ansatz_circuit(spec)).probs == pytest.approx({"011": 1.0})


@pytest.mark.parametrize("payload", [
    {"hf_occupation": "012", "terms": []},
    {"hf_occupation": "011", "terms": [{"pauli": "XX", "theta": 0.1}]},
    {"hf_occupation": "011", "terms": [{"pauli": "XQX", "theta": 0.1}]},
    {"hf_occupation": "011", "terms": [{"pauli": "XXX"}]},
    {"hf_occupation": "011", "bogus": 1},
])
def test_ansatz_spec_errors(tmp_path, payload):
    path = tmp_path / "a.json"
    path.write_text(json.dumps(payload))
    with pytest.raises(AnsatzSpecError):
        load_ansatz_spec(path)


# JSSP / QUBO / QAOA

def test_reference_instance_qubo_shape():
    qubo = jssp_to_qubo(REFERENCE_INSTANCE)
    assert qubo.num_variables == 7
    assert qubo.weights == {"penalty": 6, "one_start_penalty": 30}


def test_reference_instance_minimum():
    qubo = jssp_to_qubo(REFERENCE_INSTANCE)
    e = qubo.energies()
    best = int(np.argmin(e))
    assert np.sum(np.isclose(e, e[best])) == 1
    assert e[best] == pytest.approx(13)
    assert format(best, "07b") == "0101011"
    sched = decode_schedule(qubo, best)
    assert sched == {(0, 0): 0, (0, 1): 1, (1, 0): 1, (2, 0): 0}
    # horizon 3 admits no feasible schedule, so the minimum pays one machine overlap:
    # completion times 3 + 2 + 2 plus a single penalty of 6
    assert not schedule_is_feasible(REFERENCE_INSTANCE, sched)
    assert e[best] == 3 + 2 + 2 + qubo.weights["penalty"]


def test_feasible_horizon_minimum_is_optimal_schedule():
    inst = JsspInstance(REFERENCE_INSTANCE.jobs, horizon=4)
    qubo = jssp_to_qubo(inst)
    best = int(np.argmin(qubo.energies()))
    sched = decode_schedule(qubo, best)
    assert schedule_is_feasible(inst, sched)
    assert one_start_satisfied(qubo, best)


def test_all_minima_satisfy_one_start():
    for inst in (REFERENCE_INSTANCE, JsspInstance(((( 0, 1),), ((0, 1),)), 2),
                 JsspInstance((((0, 1), (1, 1)), ((1, 1), (0, 1))), 3)):
        qubo = jssp_to_qubo(inst)
        e = qubo.energies()
        for idx in np.flatnonzero(np.isclose(e, e.min())):
            assert one_start_satisfied(qubo, int(idx))


def test_uniform_one_start_weight_admits_dropped_operation():
    # with the one-start weight equal to the conflict penalty, skipping an operation is cheaper
    qubo = jssp_to_qubo(REFERENCE_INSTANCE, one_start_penalty=6)
    e = qubo.energies()
    best = int(np.argmin(e))
    assert e[best] == pytest.approx(10)
    assert not one_start_satisfied(qubo, best)
    assert (0, 1) not in decode_schedule(qubo, best)


def test_reference_instance_makespan():
    # exhaustive search finds 4; the claimed value of 3 is infeasible for this instance
    assert optimal_makespan(REFERENCE_INSTANCE) == 4
    assert optimal_makespan(REFERENCE_INSTANCE) != CLAIMED_MAKESPAN


def test_infeasible_horizon():
    with pytest.raises(InfeasibleHorizonError):
        jssp_to_qubo(JsspInstance((((0, 2), (1, 2)),), 3))


def test_single_variable_qubo():
    qubo = jssp_to_qubo(JsspInstance((((0, 1),),), 1))
    assert qubo.num_variables == 1
    assert qubo.energy([1]) < qubo.energy([0])


@settings(max_examples=40, deadline=None)
@given(st.dictionaries(st.integers(0, 3), st.floats(-3, 3), max_size=4),
       st.dictionaries(st.tuples(st.integers(0, 3), st.integers(0, 3)).filter(lambda p: p[0] < p[1]),
                       st.floats(-3, 3), max_size=6),
       st.floats(-2, 2))
def test_ising_diagonal_matches_qubo_energy(linear, quadratic, offset):
    qubo = Qubo(linear, quadratic, offset, tuple((0, i, 0) for i in range(4)))
    assert np.allclose(qubo.to_ising().diagonal(4), qubo.energies(), atol=1e-9)


def test_qaoa_zero_angles_is_uniform():
    qubo = jssp_to_qubo(REFERENCE_INSTANCE)
    probs = ideal_distribution(qaoa_circuit(qubo, QaoaParams((0.0,), (0.0,)))).dense()
    assert np.allclose(probs, 1 / 128)


def test_qaoa_single_variable_closed_form():
    # H = -x = (Z - 1)/2: exp(-i g Z/2) then RX(2b) on |+>; g=pi/2, b=pi/4 lands on |0>
    qubo = Qubo({0: -1.0}, {}, 0.0, ((0, 0, 0),))
    for g, b in [(np.pi / 2, np.pi / 4), (0.3, 1.1), (-0.7, 0.2)]:
        c = qaoa_circuit(qubo, QaoaParams((g,), (b,)))
        plus = np.array([1, 1]) / np.sqrt(2)
        rz = np.diag([np.exp(-0.5j * g), np.exp(0.5j * g)])
        rx = np.array([[np.cos(b), -1j * np.sin(b)], [-1j * np.sin(b), np.cos(b)]])
        ref = np.abs(rx @ rz @ plus) ** 2
        assert np.allclose(ideal_distribution(c).dense(), ref, atol=1e-12)
    c = qaoa_circuit(qubo, QaoaParams((np.pi / 2,), (np.pi / 4,)))
    assert ideal_distribution(c).probs == pytest.approx({"0": 1.0})


def test_qaoa_circuit_implements_cost_evolution():
    qubo = jssp_to_qubo(REFERENCE_INSTANCE)
    g, b = 0.21, 0.63
    n = qubo.num_variables
    diag = qubo.energies()
    mixer = sum(PauliTerm(1.0, {q: "X"}).matrix(n) for q in range(n))
    state = np.full(2 ** n, 2 ** (-n / 2), dtype=complex)
    state = expm(-1j * b * mixer) @ (np.exp(-1j * g * diag) * state)
    amps = simulate(qaoa_circuit(qubo, QaoaParams((g,), (b,)))).amplitudes
    assert abs(abs(np.vdot(state, amps)) - 1) < 1e-9


def test_default_qaoa_params_and_depth():
    params = default_qaoa_params()
    assert params.p == 1
    assert params.gammas[0] == pytest.approx(np.pi / 40)
    assert params.betas[0] == pytest.approx(7 * np.pi / 8)
    basis, _ = rebase(qaoa_circuit(jssp_to_qubo(REFERENCE_INSTANCE)))
    assert circuit_depth(basis) == 16 and basis.cnot_count == 14


def test_qaoa_default_lowers_expected_cost():
    qubo = jssp_to_qubo(REFERENCE_INSTANCE)
    probs = ideal_distribution(qaoa_circuit(qubo)).dense()
    assert probs @ qubo.energies() < qubo.energies().mean()


def test_qaoa_params_validation():
    with pytest.raises(ValueError):
        QaoaParams((0.1,), ())


# QSVM feature map

def test_bundled_features():
    rows = ingest_features()
    assert len(rows) == 10
    assert all(r.shape == (16,) and r.min() >= 0 and r.max() <= np.pi for r in rows)


def test_feature_scaling_endpoints(tmp_path):
    path = tmp_path / "f.csv"
    path.write_text(",".join(["0"] * 8 + ["255"] * 8) + "\n")
    (row,) = ingest_features(path)
    assert row[0] == 0 and row[-1] == pytest.approx(np.pi)


@pytest.mark.parametrize("text", [
    ",".join(["1"] * 15),
    ",".join(["1"] * 15 + ["x"]),
    ",".join(["1"] * 15 + ["256"]),
    ",".join(["1"] * 15 + ["-1"]),
    ",".join(["1"] * 15 + ["nan"]),
])
def test_feature_file_errors(tmp_path, text):
    path = tmp_path / "f.csv"
    path.write_text(text + "\n")
    with pytest.raises(FeatureFileError):
        ingest_features(path)


@pytest.mark.parametrize("row", range(10))
def test_qsvm_bundled_rows(row):
    c = qsvm_featuremap_circuit(ingest_features()[row])
    basis, _ = rebase(c)
    assert c.num_qubits == 8 and 9 <= circuit_depth(basis) <= 10
    assert hellinger_fidelity(ideal_distribution(c), UNIFORM8) <= 0.65


def test_qsvm_zero_features_is_ry_product():
    c = qsvm_featuremap_circuit(np.zeros(16))
    ref = Circuit(8, tuple(op for op in c.ops if op.tag.value == "ry"))
    # CNOTs act on |0...0> trivially, leaving only the RY layer
    assert np.allclose(ideal_distribution(c).dense(), ideal_distribution(ref).dense())


def test_qsvm_far_from_uniform_on_random_inputs():
    rng = np.random.default_rng(0)
    worst = max(hellinger_fidelity(ideal_distribution(qsvm_featuremap_circuit(f)), UNIFORM8)
                for f in rng.uniform(0, np.pi, size=(100, 16)))
    assert worst < 0.9


@pytest.mark.parametrize("kind, count", [("linear", 7), ("ring", 8), ("full", 28)])
def test_entangling_pairs(kind, count):
    assert len(entangling_pairs(8, kind)) == count
    with pytest.raises(ValueError):
        entangling_pairs(8, "star")


def test_qsvm_validation():
    with pytest.raises(ValueError):
        qsvm_featuremap_circuit(np.zeros(15))
    with pytest.raises(ValueError):
        qsvm_featuremap_circuit(np.zeros(16), thetas=(0.1,))


# Quantum volume

def test_qv_deterministic():
    assert qv_circuit(4, 3) == qv_circuit(4, 3)
    assert qv_circuit(4, 3) != qv_circuit(4, 4)


def test_qv_shape():
    c = qv_circuit(4, 1)
    assert c.num_qubits == 4 and c.name == "qv_m4_d4_s1" and c.cnot_count <= 3 * 2 * 4
    assert qv_circuit(3, 1, depth=2).name == "qv_m3_d2_s1"


def test_qv_unitary_seed_keeps_pairings():
    a, b = qv_circuit(4, 5), qv_circuit(4, 5, unitary_seed=9)
    pairs = lambda c: [op.qubits for op in c.ops if len(op.qubits) == 2]
    assert set(map(frozenset, pairs(a))) == set(map(frozenset, pairs(b)))
    assert not equal_up_to_phase(unitary_of(a), unitary_of(b))


def test_qv_validation():
    with pytest.raises(ValueError):
        qv_circuit(1, 0)
    with pytest.raises(ValueError):
        qv_circuit(3, 0, depth=0)
