"""Generate, transpile, execute, score and report benchmark suites."""
from __future__ import annotations

import csv
import io
import json
import os
import time
import zlib
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Any, Callable

import numpy as np

from .. import __version__
from ..circuit import Circuit
from ..counts import CountsFile, CountsError, read_counts
from ..generators import (JsspInstance, REFERENCE_INSTANCE, QaoaParams, default_qaoa_params,
                          ghz_circuit, ghz_parity_circuits, grover3_circuit, ingest_features,
                          iqft_benchmark_circuit, jssp_to_qubo, load_ansatz_spec,
                          optimal_makespan, qaoa_circuit, qsvm_featuremap_circuit, qv_circuit,
                          toffoli_expected_output, toffoli_truthtable_suite, vqe_ansatz_circuit)
from ..generators.qaoa import CLAIMED_MAKESPAN, REFERENCE_DEPTH
from ..metrics import (ClopsInput, benchmark_pass, clops, ghz_score, heavy_output_probability,
                       hellinger_fidelity, normalized_fidelity, qv_evaluate, truth_table_success,
                       QvRecord)
from ..qasm import emit_qasm2, emit_qasm3
from ..simulator import Distribution, NoiseModel, ideal_distribution, run_noisy, sample_counts
from ..transpiler import rebase
from .config import BackendSpec, BenchmarkSpec, ConfigError, SuiteConfig

MAX_UNIFORM_OVERLAP = 0.9
TIMING_FIELDS = ("created", "exec_time_s", "time_taken_s", "clops")


class MissingResultsError(RuntimeError):
    pass


@dataclass
class Job:
    """One executable circuit of a benchmark plus what scoring needs to know about it."""

    key: str
    logical: Circuit
    basis: Circuit
    meta: dict[str, Any] = field(default_factory=dict)


@dataclass
class Plan:
    spec: BenchmarkSpec
    jobs: list[Job]
    score: Callable[[dict[str, CountsFile]], tuple[float, dict[str, Any]]]
    info: dict[str, Any] = field(default_factory=dict)

    @property
    def n_qubits(self) -> int:
        return max(j.basis.num_qubits for j in self.jobs)

    @property
    def depth(self) -> int:
        return max(j.meta["depth"] for j in self.jobs)

    @property
    def cnot_count(self) -> int:
        return max(j.basis.cnot_count for j in self.jobs)


def _job(key: str, circuit: Circuit, **meta) -> Job:
    basis, report = rebase(circuit, verify=False)
    meta.update(depth=report.depth)
    return Job(key, circuit, basis.renamed(key), meta)


def _normalized_plan(spec: BenchmarkSpec, circuit: Circuit, **info) -> Plan:
    ideal = ideal_distribution(circuit)
    f_u = hellinger_fidelity(ideal, Distribution.uniform(circuit.num_qubits))
    if f_u > MAX_UNIFORM_OVERLAP:
        raise ValueError(f"{circuit.name}: ideal output too close to uniform (F_s = {f_u:.4f})")
    job = _job(circuit.name, circuit)

    def score(results):
        s = normalized_fidelity(ideal, results[job.key])
        return s.f, {"f_s": s.f_s, "f_s_uniform": s.f_s_uniform, "f_raw": s.f_raw}

    return Plan(spec, [job], score, info)


def build_plan(spec: BenchmarkSpec) -> Plan:
    k = spec.knobs
    if spec.name == "ghz":
        pop = _job(f"ghz_n{k['N']}", ghz_circuit(k["N"]))
        parity = [_job(f"ghz_n{k['N']}_parity{i:02d}", c, phase=phi)
                  for i, (phi, c) in enumerate(ghz_parity_circuits(k["N"]))]

        def score(results):
            g = ghz_score(results[pop.key], [(j.meta["phase"], results[j.key]) for j in parity])
            return g.fidelity, {"population": g.population, "coherence": g.coherence}

        return Plan(spec, [pop] + parity, score)

    if spec.name == "toffoli":
        n = k["n"]
        jobs = [_job(c.name, c, input=inp, expected_output=toffoli_expected_output(inp))
                for inp, c in toffoli_truthtable_suite(n, k["approximate"])]

        def score(results):
            return truth_table_success([(j.meta["input"], results[j.key]) for j in jobs], n), {}

        return Plan(spec, jobs, score)

    if spec.name == "grover":
        c = grover3_circuit(k["marked"], k["iterations"])
        plan = _normalized_plan(spec, c)
        plan.jobs[0].meta["expected_output"] = k["marked"]
        return plan

    if spec.name == "iqft":
        c = iqft_benchmark_circuit(k["n"], k["x"])
        plan = _normalized_plan(spec, c)
        plan.jobs[0].meta["expected_output"] = format(k["x"], f"0{k['n']}b")
        return plan

    if spec.name == "vqe":
        return _normalized_plan(spec, vqe_ansatz_circuit(load_ansatz_spec(k["spec"])))

    if spec.name == "qaoa":
        jobs = REFERENCE_INSTANCE.jobs if k["jobs"] is None else k["jobs"]
        instance = JsspInstance(tuple(tuple(tuple(op) for op in job) for job in jobs), k["horizon"])
        qubo = jssp_to_qubo(instance, penalty=k["penalty"])
        params = default_qaoa_params() if k["gammas"] is None else QaoaParams(k["gammas"], k["betas"])
        c = qaoa_circuit(qubo, params)
        info = {"num_variables": qubo.num_variables, "computed_optimal_makespan": optimal_makespan(instance),
                "gammas": list(params.gammas), "betas": list(params.betas)}
        if instance == REFERENCE_INSTANCE:
            info.update(claimed_makespan=CLAIMED_MAKESPAN,
                        reference_depth=REFERENCE_DEPTH)
        return _normalized_plan(spec, c, **info)

    if spec.name == "qsvm":
        rows = ingest_features(k["features_csv"])
        if not 0 <= k["sample"] < len(rows):
            raise ValueError(f"qsvm sample {k['sample']} outside the {len(rows)} available rows")
        kwargs = {} if k["thetas"] is None else {"thetas": k["thetas"]}
        c = qsvm_featuremap_circuit(rows[k["sample"]], entanglement=k["entanglement"],
                                    name=f"qsvm_n8_s{k['sample']}", **kwargs)
        return _normalized_plan(spec, c)

    if spec.name == "qv":
        jobs = []
        for m in k["widths"]:
            for i in range(k["circuits"]):
                c = qv_circuit(m, seed=1000 * m + i)
                jobs.append(_job(c.name, c, m=m))
        ideals = {j.key: ideal_distribution(j.logical) for j in jobs}

        def score(results):
            records = [QvRecord(j.meta["m"], j.meta["m"], heavy_output_probability(ideals[j.key], results[j.key]))
                       for j in jobs]
            means = {}
            for m in k["widths"]:
                hs = [r.h_u for r in records if r.m == m]
                means[str(m)] = float(np.mean(hs))
            return min(means.values()), {"log2_quantum_volume": qv_evaluate(records),
                                         "mean_heavy_output": means}

        return Plan(spec, jobs, score)

    raise ConfigError(f"no plan for benchmark {spec.name!r}")


def stream_seeds(global_seed: int, label: str, count: int) -> list[int]:
    """Independent per-circuit seeds derived from (global seed, benchmark label)."""
    ss = np.random.SeedSequence([global_seed, zlib.crc32(label.encode("utf-8"))])
    return [int(child.generate_state(1, dtype=np.uint32)[0]) for child in ss.spawn(count)]


def execute(plan: Plan, backend: BackendSpec, global_seed: int) -> tuple[dict[str, CountsFile], float | None]:
    """Run every job of a plan; returns counts and backend-only wall time."""
    seeds = stream_seeds(global_seed, plan.spec.label, len(plan.jobs))
    results: dict[str, CountsFile] = {}
    if backend.kind == "external":
        missing = []
        times = []
        for job in plan.jobs:
            path = os.path.join(backend.counts_dir, f"{job.key}.json")
            if not os.path.exists(path):
                missing.append(job.key)
                continue
            results[job.key] = read_counts(path)
            times.append(results[job.key].wall_time_s)
        if missing:
            raise MissingResultsError(f"{len(missing)} counts file(s) missing, e.g. {missing[0]}.json")
        return results, (sum(times) if all(t is not None for t in times) else None)
    elapsed = 0.0
    for job, seed in zip(plan.jobs, seeds):
        start = time.perf_counter()
        if backend.kind == "noisy":
            counts = run_noisy(job.basis, backend.noise, plan.spec.shots, seed)
        else:
            counts = sample_counts(ideal_distribution(job.basis), plan.spec.shots, seed)
        elapsed += time.perf_counter() - start
        results[job.key] = counts
    return results, elapsed


def run_benchmark(spec: BenchmarkSpec, backend: BackendSpec, global_seed: int) -> dict[str, Any]:
    entry: dict[str, Any] = {"benchmark": spec.name, "shots": spec.shots, "threshold": spec.threshold,
                             "backend": backend.kind, "seed": global_seed, "harness_version": __version__}
    if spec.name == "clops":
        k = spec.knobs
        entry.update(run_clops(k["M"], k["K"], k["S"], k["D"], global_seed, width=k["width"],
                               counts_dir=backend.counts_dir if backend.kind == "external" else None))
        return entry
    try:
        plan = build_plan(spec)
    except (ValueError, OSError) as exc:
        entry.update(status="error", error=str(exc), fidelity=None, depth=None, exec_time_s=None,
                     n_qubits=None, cnot_count=None, **{"pass": False})
        return entry
    entry.update(n_qubits=plan.n_qubits, depth=plan.depth, cnot_count=plan.cnot_count,
                 num_circuits=len(plan.jobs), gate_counts=_gate_counts(plan), **plan.info)
    try:
        results, elapsed = execute(plan, backend, global_seed)
        score, components = plan.score(results)
    except MissingResultsError as exc:
        entry.update(status="missing-results", error=str(exc), fidelity=None, exec_time_s=None,
                     **{"pass": False})
        return entry
    except (CountsError, ValueError) as exc:
        entry.update(status="error", error=str(exc), fidelity=None, exec_time_s=None, **{"pass": False})
        return entry
    passed = benchmark_pass(score, spec.threshold) if spec.threshold is not None else True
    entry.update(status="ok", fidelity=float(score), components=components, exec_time_s=elapsed,
                 **{"pass": passed})
    return entry


def _gate_counts(plan: Plan) -> dict[str, int]:
    # the largest circuit of the benchmark is the representative one
    job = max(plan.jobs, key=lambda j: (len(j.basis.ops), j.key))
    return dict(sorted(job.basis.count_ops().items()))


def clops_templates(M: int, K: int, D: int, seed: int, width: int) -> list[list[tuple[int, int, str]]]:
    """``(template_seed, update_seed, circuit_name)`` for each of the M x K CLOPS circuits."""
    rng = np.random.default_rng(seed)
    template_seeds = [int(s) for s in rng.integers(0, 2 ** 31, size=M)]
    update_seeds = [[int(s) for s in rng.integers(0, 2 ** 31, size=K)] for _ in range(M)]
    return [[(t, u, f"qv_m{width}_d{D}_s{t}_u{u}") for u in us]
            for t, us in zip(template_seeds, update_seeds)]


def run_clops(M: int, K: int, S: int, D: int, seed: int, width: int | None = None,
              counts_dir: str | None = None) -> dict[str, Any]:
    """Time M templates x K parameter updates x S shots of D-layer QV-style circuits."""
    width = width or D
    ClopsInput(M, K, S, D, 1.0)  # field validation
    circuits = [c for row in clops_templates(M, K, D, seed, width) for c in row]
    external_time = None
    if counts_dir is not None:
        times = []
        for _, _, name in circuits:
            path = os.path.join(counts_dir, f"{name}.json")
            times.append(read_counts(path).wall_time_s if os.path.exists(path) else None)
        if all(t is not None for t in times):
            external_time = float(sum(times))
    start = time.perf_counter()
    if external_time is None:
        for t_seed, u_seed, _ in circuits:
            c = qv_circuit(width, t_seed, depth=D, unitary_seed=u_seed)
            sample_counts(ideal_distribution(c), S, u_seed)
    elapsed = external_time if external_time is not None else time.perf_counter() - start
    elapsed = max(elapsed, 1e-9)
    value = clops(ClopsInput(M, K, S, D, elapsed))
    return {"status": "ok", "M": M, "K": K, "S": S, "D": D, "width": width,
            "time_source": "counts-metadata" if external_time is not None else "measured",
            "time_taken_s": elapsed, "clops": value, "exec_time_s": elapsed, "fidelity": None,
            "n_qubits": width, "depth": None, "cnot_count": None, "pass": value > 0}


def run_suite(config: SuiteConfig, backend: BackendSpec | None = None, seed: int | None = None) -> dict:
    backend = backend or config.backend
    seed = config.seed if seed is None else seed
    entries = {spec.label: run_benchmark(spec, backend, seed) for spec in config.benchmarks}
    cfg = config.to_json()
    cfg.update(seed=seed, backend=backend.to_json())
    return {
        "harness_version": __version__,
        "created": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "config": cfg,
        "benchmarks": {label: entries[label] for label in sorted(entries)},
        "all_pass": all(e["pass"] for e in entries.values()),
    }


SUMMARY_COLUMNS = ("benchmark", "n_qubits", "depth", "cnot_count", "shots", "fidelity", "threshold",
                   "pass", "exec_time_s")


def summary_csv(report: dict) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SUMMARY_COLUMNS)
    for label, e in report["benchmarks"].items():
        fidelity = e["fidelity"] if e["fidelity"] is not None else e.get("clops")
        writer.writerow([label, e.get("n_qubits"), e.get("depth"), e.get("cnot_count"), e.get("shots"),
                         "" if fidelity is None else repr(fidelity),
                         "" if e.get("threshold") is None else e["threshold"],
                         str(e["pass"]).lower(),
                         "" if e.get("exec_time_s") is None else f"{e['exec_time_s']:.6f}"])
    return buf.getvalue()


def report_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def write_report(report: dict, out_dir: str | os.PathLike) -> tuple[str, str]:
    os.makedirs(out_dir, exist_ok=True)
    json_path = os.path.join(out_dir, "report.json")
    csv_path = os.path.join(out_dir, "summary.csv")
    with open(json_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(report_json(report))
    with open(csv_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(summary_csv(report))
    return json_path, csv_path


def strip_timing(report: dict) -> dict:
    """Copy of a report without timestamp and timing fields (for reproducibility checks)."""
    def clean(obj):
        if isinstance(obj, dict):
            return {k: clean(v) for k, v in obj.items() if k not in TIMING_FIELDS}
        if isinstance(obj, list):
            return [clean(v) for v in obj]
        return obj
    return clean(report)


def export_circuits(config: SuiteConfig, out_dir: str | os.PathLike) -> str:
    """Write ``.qasm``/``.qasm3`` per circuit plus ``manifest.json``; returns the manifest path."""
    os.makedirs(out_dir, exist_ok=True)
    manifest: dict[str, Any] = {"harness_version": __version__, "benchmarks": {}}
    for spec in config.benchmarks:
        if spec.name == "clops":
            continue
        plan = build_plan(spec)
        files = []
        for job in plan.jobs:
            for ext, emit in ((".qasm", emit_qasm2), (".qasm3", emit_qasm3)):
                with open(os.path.join(out_dir, job.key + ext), "w", encoding="utf-8", newline="\n") as fh:
                    fh.write(emit(job.basis))
            entry = {"key": job.key, "qasm": job.key + ".qasm", "qasm3": job.key + ".qasm3",
                     "counts": job.key + ".json", "n_qubits": job.basis.num_qubits}
            entry.update({k: v for k, v in job.meta.items() if k != "depth"})
            files.append(entry)
        manifest["benchmarks"][spec.label] = {"benchmark": spec.name, "shots": spec.shots,
                                              "threshold": spec.threshold, "circuits": files}
    path = os.path.join(out_dir, "manifest.json")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path


def score_counts(ideal_circuit: Circuit, counts: CountsFile, threshold: float = 0.5) -> dict[str, Any]:
    ideal = ideal_distribution(ideal_circuit)
    s = normalized_fidelity(ideal, counts)
    return {"circuit": ideal_circuit.name, "shots": counts.shots, "f_s": s.f_s,
            "f_s_uniform": s.f_s_uniform, "f_raw": s.f_raw, "fidelity": s.f,
            "threshold": threshold, "pass": benchmark_pass(s.f, threshold)}


def noise_backend(p1: float, p2: float, readout_flip: float = 0.0) -> BackendSpec:
    return BackendSpec("noisy", noise=NoiseModel(p1, p2, readout_flip))
