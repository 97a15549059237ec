"""``qappbench`` command line: run, export, clops and score."""
from __future__ import annotations

import argparse
import json
import sys

from ..counts import CountsError, read_counts
from ..metrics import MetricError
from ..qasm import QasmError, load_qasm
from .config import BackendSpec, ConfigError, DEFAULT_NOISE, default_suite, load_config
from .runner import export_circuits, noise_backend, run_clops, run_suite, score_counts, write_report


def _config(path):
    return default_suite() if path in (None, "default") else load_config(path)


def _backend(args, config) -> BackendSpec:
    kind = args.backend
    if kind is None:
        return config.backend
    if kind == "ideal":
        return BackendSpec("ideal")
    if kind == "noisy":
        base = config.backend.noise
        defaults = DEFAULT_NOISE if base is None else {
            "p1": base.p1, "p2": base.p2, "readout_flip": base.readout_flip}
        p1 = defaults["p1"] if args.p1 is None else args.p1
        p2 = defaults["p2"] if args.p2 is None else args.p2
        ro = defaults["readout_flip"] if args.readout_flip is None else args.readout_flip
        return noise_backend(p1, p2, ro)
    counts_dir = args.counts_dir or config.backend.counts_dir
    if counts_dir is None:
        raise ConfigError("--backend external needs --counts-dir (or a 'dir' in the config)")
    return BackendSpec("external", counts_dir=counts_dir)


def cmd_run(args) -> int:
    config = _config(args.config)
    report = run_suite(config, backend=_backend(args, config), seed=args.seed)
    out = args.out or config.output_dir
    json_path, csv_path = write_report(report, out)
    for label, e in report["benchmarks"].items():
        score = e["fidelity"] if e["fidelity"] is not None else e.get("clops")
        shown = "-" if score is None else f"{score:.4f}"
        print(f"{label:<28} {e['status']:<16} score={shown:<10} pass={str(e['pass']).lower()}")
    print(f"wrote {json_path} and {csv_path}")
    return 0 if report["all_pass"] else 1


def cmd_export(args) -> int:
    path = export_circuits(_config(args.config), args.out)
    print(f"wrote {path}")
    return 0


def cmd_clops(args) -> int:
    entry = run_clops(args.m, args.k, args.s, args.d, args.seed, width=args.width,
                      counts_dir=args.counts_dir)
    print(json.dumps(entry, indent=2, sort_keys=True))
    return 0


def cmd_score(args) -> int:
    circuit = load_qasm(args.ideal)
    result = score_counts(circuit, read_counts(args.counts), args.threshold)
    print(json.dumps(result, indent=2, sort_keys=True))
    return 0 if result["pass"] else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qappbench",
                                     description="Application-oriented quantum benchmark harness.")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a suite and write report.json and summary.csv")
    run.add_argument("--config", default="default", help="suite JSON file, or 'default'")
    run.add_argument("--backend", choices=("ideal", "noisy", "external"))
    run.add_argument("--seed", type=int)
    run.add_argument("--out", help="output directory (defaults to the config's output_dir)")
    run.add_argument("--p1", type=float, help="noisy backend: 1-qubit Pauli error probability")
    run.add_argument("--p2", type=float, help="noisy backend: CNOT Pauli error probability")
    run.add_argument("--readout-flip", type=float, help="noisy backend: readout flip probability")
    run.add_argument("--counts-dir", help="external backend: directory of <circuit>.json counts")
    run.set_defaults(func=cmd_run)

    export = sub.add_parser("export", help="write OpenQASM 2.0/3.0 files and a manifest")
    export.add_argument("--config", default="default")
    export.add_argument("--out", required=True)
    export.set_defaults(func=cmd_export)

    cl = sub.add_parser("clops", help="time QV-style templates and report CLOPS")
    cl.add_argument("--m", type=int, default=2, help="circuit templates")
    cl.add_argument("--k", type=int, default=2, help="parameter updates per template")
    cl.add_argument("--s", type=int, default=1000, help="shots per circuit")
    cl.add_argument("--d", type=int, default=4, help="QV layers")
    cl.add_argument("--seed", type=int, default=0)
    cl.add_argument("--width", type=int, help="qubits per template (default: d)")
    cl.add_argument("--counts-dir", help="use wall_time_s from external counts when present")
    cl.set_defaults(func=cmd_clops)

    sc = sub.add_parser("score", help="normalized fidelity of external counts for one circuit")
    sc.add_argument("--ideal", required=True, help=".qasm or .qasm3 file of the circuit")
    sc.add_argument("--counts", required=True, help="counts JSON file")
    sc.add_argument("--threshold", type=float, default=0.5)
    sc.set_defaults(func=cmd_score)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, QasmError, CountsError, MetricError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
