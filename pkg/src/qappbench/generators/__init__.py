"""Benchmark circuit families."""
from .ghz import ghz_circuit, ghz_parity_circuits, parity_phases
from .grover import grover3_circuit
from .iqft import iqft_benchmark_circuit
from .pauli import PauliSum, PauliTerm
from .qaoa import (REFERENCE_INSTANCE, InfeasibleHorizonError, JsspInstance, QaoaParams, Qubo,
                   default_qaoa_params, jssp_to_qubo, optimal_makespan, qaoa_circuit)
from .qsvm import ingest_features, qsvm_featuremap_circuit
from .qv import qv_circuit
from .toffoli import toffoli_expected_output, toffoli_truthtable_suite
from .vqe import AnsatzSpec, load_ansatz_spec, vqe_ansatz_circuit

__all__ = [
    "AnsatzSpec", "InfeasibleHorizonError", "JsspInstance", "REFERENCE_INSTANCE", "PauliSum",
    "PauliTerm", "QaoaParams", "Qubo", "default_qaoa_params", "ghz_circuit",
    "ghz_parity_circuits", "grover3_circuit", "ingest_features", "iqft_benchmark_circuit",
    "jssp_to_qubo", "load_ansatz_spec", "optimal_makespan", "parity_phases", "qaoa_circuit",
    "qsvm_featuremap_circuit", "qv_circuit", "toffoli_expected_output",
    "toffoli_truthtable_suite", "vqe_ansatz_circuit",
]
