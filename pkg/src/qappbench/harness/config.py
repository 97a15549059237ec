"""Suite configuration: JSON schema, validation and the default suite."""
from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from typing import Any

from ..counts import MIN_SCORED_SHOTS
from ..metrics import DEFAULT_THRESHOLD, GHZ_THRESHOLD, HEAVY_OUTPUT_THRESHOLD, TOFFOLI_THRESHOLD
from ..simulator import NoiseModel

BENCHMARK_NAMES = ("ghz", "toffoli", "grover", "iqft", "vqe", "qaoa", "qsvm", "qv", "clops")
BACKEND_KINDS = ("ideal", "noisy", "external")
DEFAULT_SHOTS = 1000
DEFAULT_NOISE = {"p1": 0.001, "p2": 0.01, "readout_flip": 0.0}

# knob name -> default, per benchmark
KNOBS: dict[str, dict[str, Any]] = {
    "ghz": {"N": 7},
    "toffoli": {"n": 5, "approximate": None},
    "grover": {"marked": "111", "iterations": 2},
    "iqft": {"n": 5, "x": 21},
    "vqe": {"spec": None},
    "qaoa": {"jobs": None, "horizon": 3, "gammas": None, "betas": None, "penalty": None},
    "qsvm": {"sample": 0, "features_csv": None, "entanglement": "linear", "thetas": None},
    "qv": {"widths": [2, 3, 4], "circuits": 100},
    "clops": {"M": 2, "K": 2, "S": 1000, "D": 4, "width": None},
}
THRESHOLDS = {"ghz": GHZ_THRESHOLD, "toffoli": TOFFOLI_THRESHOLD, "qv": HEAVY_OUTPUT_THRESHOLD,
              "clops": None}
COMMON_KEYS = {"name", "label", "shots", "threshold"}


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class BackendSpec:
    kind: str = "ideal"
    noise: NoiseModel | None = None
    counts_dir: str | None = None

    def to_json(self) -> dict:
        out: dict[str, Any] = {"kind": self.kind}
        if self.noise is not None:
            out.update(p1=self.noise.p1, p2=self.noise.p2, readout_flip=self.noise.readout_flip)
        if self.counts_dir is not None:
            out["dir"] = self.counts_dir
        return out

    @classmethod
    def from_json(cls, data: Any) -> "BackendSpec":
        if isinstance(data, str):
            data = {"kind": data}
        if not isinstance(data, dict):
            raise ConfigError("'backend' must be a string or an object")
        kind = data.get("kind", "ideal")
        allowed = {"ideal": {"kind"}, "noisy": {"kind", "p1", "p2", "readout_flip"},
                   "external": {"kind", "dir"}}
        if kind not in allowed:
            raise ConfigError(f"unknown backend {kind!r}; expected one of {BACKEND_KINDS}")
        unknown = set(data) - allowed[kind]
        if unknown:
            raise ConfigError(f"unknown keys for {kind} backend: {sorted(unknown)}")
        if kind == "noisy":
            params = {k: float(data.get(k, DEFAULT_NOISE[k])) for k in DEFAULT_NOISE}
            try:
                return cls("noisy", noise=NoiseModel(**params))
            except ValueError as exc:
                raise ConfigError(str(exc)) from None
        if kind == "external":
            if not isinstance(data.get("dir"), str):
                raise ConfigError("external backend needs a 'dir' holding counts files")
            return cls("external", counts_dir=data["dir"])
        return cls("ideal")


@dataclass(frozen=True)
class BenchmarkSpec:
    name: str
    label: str
    shots: int
    threshold: float | None
    knobs: dict[str, Any] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"name": self.name, "label": self.label, "shots": self.shots,
                "threshold": self.threshold, **self.knobs}

    @classmethod
    def from_json(cls, data: Any) -> "BenchmarkSpec":
        if not isinstance(data, dict):
            raise ConfigError("each benchmark entry must be an object")
        name = data.get("name")
        if name not in BENCHMARK_NAMES:
            raise ConfigError(f"unknown benchmark {name!r}; expected one of {BENCHMARK_NAMES}")
        unknown = set(data) - COMMON_KEYS - set(KNOBS[name])
        if unknown:
            raise ConfigError(f"unknown keys for benchmark {name!r}: {sorted(unknown)}")
        knobs = {k: data.get(k, default) for k, default in KNOBS[name].items()}
        shots = data.get("shots", DEFAULT_SHOTS)
        if not isinstance(shots, int) or isinstance(shots, bool):
            raise ConfigError(f"{name}: shots must be an integer")
        if shots < MIN_SCORED_SHOTS and name != "clops":
            raise ConfigError(f"{name}: scored runs need at least {MIN_SCORED_SHOTS} shots, got {shots}")
        threshold = data.get("threshold", THRESHOLDS.get(name, DEFAULT_THRESHOLD))
        if threshold is not None and not isinstance(threshold, (int, float)):
            raise ConfigError(f"{name}: threshold must be a number")
        label = data.get("label") or default_label(name, knobs)
        if not isinstance(label, str):
            raise ConfigError(f"{name}: label must be a string")
        return cls(name, label, shots, None if threshold is None else float(threshold), knobs)


def default_label(name: str, knobs: dict[str, Any]) -> str:
    if name == "ghz":
        return f"ghz_n{knobs['N']}"
    if name == "toffoli":
        n = knobs["n"]
        approx = knobs["approximate"]
        if approx is None:
            approx = n == 6
        return f"toffoli_n{n}_{'approx' if approx else 'exact'}"
    if name == "grover":
        return f"grover3_m{knobs['marked']}_i{knobs['iterations']}"
    if name == "iqft":
        return f"iqft_n{knobs['n']}_x{knobs['x']}"
    if name == "qsvm":
        return f"qsvm_n8_s{knobs['sample']}"
    if name == "clops":
        return f"clops_m{knobs['M']}_k{knobs['K']}_s{knobs['S']}_d{knobs['D']}"
    return name


@dataclass(frozen=True)
class SuiteConfig:
    benchmarks: tuple[BenchmarkSpec, ...]
    backend: BackendSpec = BackendSpec()
    seed: int = 0
    output_dir: str = "results"

    def to_json(self) -> dict:
        return {"seed": self.seed, "output_dir": self.output_dir, "backend": self.backend.to_json(),
                "benchmarks": [b.to_json() for b in self.benchmarks]}

    @classmethod
    def from_json(cls, data: Any) -> "SuiteConfig":
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
        unknown = set(data) - {"benchmarks", "backend", "seed", "output_dir"}
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        entries = data.get("benchmarks")
        if not isinstance(entries, list) or not entries:
            raise ConfigError("'benchmarks' must be a non-empty list")
        benchmarks = tuple(BenchmarkSpec.from_json(e) for e in entries)
        labels = [b.label for b in benchmarks]
        dupes = sorted({l for l in labels if labels.count(l) > 1})
        if dupes:
            raise ConfigError(f"duplicate benchmark labels {dupes}; set 'label' to disambiguate")
        seed = data.get("seed", 0)
        if not isinstance(seed, int) or isinstance(seed, bool) or seed < 0:
            raise ConfigError("'seed' must be a nonnegative integer")
        out = data.get("output_dir", "results")
        if not isinstance(out, str):
            raise ConfigError("'output_dir' must be a string")
        return cls(benchmarks, BackendSpec.from_json(data.get("backend", "ideal")), seed, out)


def load_config(path: str | os.PathLike) -> SuiteConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from None
    return SuiteConfig.from_json(data)


# Shots are set so sampling error alone keeps every ideal-backend score above 0.99.
DEFAULT_SUITE = {
    "seed": 2024,
    "output_dir": "results",
    "backend": {"kind": "ideal"},
    "benchmarks": [
        {"name": "ghz", "N": 7, "shots": 4000},
        {"name": "toffoli", "n": 5, "approximate": False, "shots": 1000},
        {"name": "toffoli", "n": 6, "approximate": True, "shots": 1000},
        {"name": "grover", "marked": "111", "iterations": 2, "shots": 4000},
        {"name": "iqft", "n": 5, "x": 21, "shots": 1000},
        {"name": "vqe", "shots": 4000},
        {"name": "qaoa", "shots": 40000},
        {"name": "qsvm", "sample": 0, "shots": 100000},
    ],
}


def default_suite() -> SuiteConfig:
    return SuiteConfig.from_json(json.loads(json.dumps(DEFAULT_SUITE)))
