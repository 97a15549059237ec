"""Scoring: classical and normalized fidelity, GHZ, truth tables, heavy outputs, QV and CLOPS."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence, Union

import numpy as np

from .counts import CountsFile
from .simulator import Distribution

DEFAULT_THRESHOLD = 0.5
TOFFOLI_THRESHOLD = 0.5
GHZ_THRESHOLD = 0.5
HEAVY_OUTPUT_THRESHOLD = 2 / 3
DEGENERATE_TOL = 1e-9

Outcomes = Union[CountsFile, Distribution]


class MetricError(ValueError):
    pass


class WidthMismatchError(MetricError):
    pass


class DegenerateBenchmarkError(MetricError):
    """The ideal distribution is (nearly) uniform, so normalization is undefined."""


class SettingCountError(MetricError):
    pass


class MissingInputError(MetricError):
    pass


class NonPositiveFieldError(MetricError):
    pass


def as_distribution(outcomes: Outcomes) -> Distribution:
    if isinstance(outcomes, Distribution):
        return outcomes
    return Distribution.from_counts(outcomes)


def _check_widths(a: Distribution, b: Distribution) -> None:
    if a.num_qubits != b.num_qubits:
        raise WidthMismatchError(f"distributions over {a.num_qubits} and {b.num_qubits} qubits")


def hellinger_fidelity(p_ideal: Distribution, p_output: Outcomes) -> float:
    """Squared Bhattacharyya coefficient ``(sum_x sqrt(p(x) q(x)))^2``."""
    q = as_distribution(p_output)
    _check_widths(p_ideal, q)
    # summing in a fixed key order keeps equal inputs bit-for-bit equal
    bc = math.fsum(math.sqrt(p * q[k]) for k, p in sorted(p_ideal.probs.items()))
    return min(bc * bc, 1.0)


def total_variation(p: Distribution, q: Outcomes) -> float:
    q = as_distribution(q)
    _check_widths(p, q)
    keys = set(p.probs) | set(q.probs)
    return 0.5 * math.fsum(abs(p[k] - q[k]) for k in keys)


@dataclass(frozen=True)
class FidelityScore:
    f_s: float
    f_s_uniform: float
    f_raw: float
    f: float


def normalized_fidelity(p_ideal: Distribution, output: Outcomes) -> FidelityScore:
    """Fidelity rescaled so the uniform distribution scores 0 and the ideal one 1, clamped at 0."""
    q = as_distribution(output)
    _check_widths(p_ideal, q)
    f_u = hellinger_fidelity(p_ideal, Distribution.uniform(p_ideal.num_qubits))
    if f_u >= 1 - DEGENERATE_TOL:
        raise DegenerateBenchmarkError(
            f"ideal distribution is indistinguishable from uniform (F_s = {f_u:.12f})")
    f_s = hellinger_fidelity(p_ideal, q)
    f_raw = (f_s - f_u) / (1 - f_u)
    return FidelityScore(f_s, f_u, f_raw, max(f_raw, 0.0))


# GHZ

@dataclass(frozen=True)
class GhzScore:
    population: float
    coherence: float

    @property
    def fidelity(self) -> float:
        return (self.population + self.coherence) / 2


def ghz_population(counts: Outcomes) -> float:
    d = as_distribution(counts)
    n = d.num_qubits
    return d["0" * n] + d["1" * n]


def parity(outcomes: Outcomes) -> float:
    d = as_distribution(outcomes)
    return math.fsum((-1) ** key.count("1") * p for key, p in d.probs.items())


def ghz_coherence(parity_samples: Sequence[tuple[float, Outcomes]]) -> float:
    """Magnitude of the frequency-N Fourier component of the parity oscillation."""
    if not parity_samples:
        raise SettingCountError("no parity settings given")
    n = as_distribution(parity_samples[0][1]).num_qubits
    if len(parity_samples) != 2 * n + 2:
        raise SettingCountError(f"expected {2 * n + 2} phase settings for N={n}, "
                                f"got {len(parity_samples)}")
    amp = sum(parity(out) * np.exp(-1j * n * phi) for phi, out in parity_samples)
    c = abs(2 * amp / len(parity_samples))
    return float(min(max(c, 0.0), 1.0))


def ghz_score(population_counts: Outcomes,
              parity_samples: Sequence[tuple[float, Outcomes]]) -> GhzScore:
    return GhzScore(ghz_population(population_counts), ghz_coherence(parity_samples))


# Truth tables

def truth_table_success(results: Iterable[tuple[str, Outcomes]], n: int,
                        expected: Callable[[str], str] | None = None) -> float:
    """Mean probability of the expected output over all ``2^n`` basis inputs."""
    if expected is None:
        from .generators.toffoli import toffoli_expected_output as expected
    by_input = {inp: as_distribution(out) for inp, out in results}
    all_inputs = {format(i, f"0{n}b") for i in range(2 ** n)}
    missing = all_inputs - set(by_input)
    if missing:
        raise MissingInputError(f"{len(missing)} of {2 ** n} inputs missing, e.g. {min(missing)}")
    extra = set(by_input) - all_inputs
    if extra:
        raise MissingInputError(f"unexpected inputs {sorted(extra)[:3]}")
    return math.fsum(by_input[i][expected(i)] for i in sorted(all_inputs)) / 2 ** n


# Quantum volume

def heavy_set(p_ideal: Distribution) -> set[str]:
    """Outcomes whose ideal probability is strictly above the median over all 2^m values."""
    dense = p_ideal.dense()
    median = float(np.median(dense))
    m = p_ideal.num_qubits
    return {format(i, f"0{m}b") for i in np.flatnonzero(dense > median)}


def heavy_output_probability(p_ideal: Distribution, output: Outcomes) -> float:
    q = as_distribution(output)
    _check_widths(p_ideal, q)
    heavy = heavy_set(p_ideal)
    return math.fsum(p for k, p in q.probs.items() if k in heavy)


@dataclass(frozen=True)
class QvRecord:
    m: int
    d: int
    h_u: float

    @property
    def passed(self) -> bool:
        return self.h_u > HEAVY_OUTPUT_THRESHOLD


def qv_evaluate(records: Iterable[QvRecord]) -> int:
    """log2 of the quantum volume: largest passing width with every smaller width passing."""
    groups: dict[int, list[QvRecord]] = {}
    for r in records:
        groups.setdefault(r.m, []).append(r)
    best = 0
    for m in sorted(groups):
        rs = groups[m]
        mean_h = math.fsum(r.h_u for r in rs) / len(rs)
        if not mean_h > HEAVY_OUTPUT_THRESHOLD:
            break
        best = max(best, min(m, min(r.d for r in rs)))
    return best


# CLOPS

@dataclass(frozen=True)
class ClopsInput:
    M: int
    K: int
    S: int
    D: int
    time_taken: float

    def __post_init__(self):
        for name in ("M", "K", "S", "D", "time_taken"):
            value = getattr(self, name)
            if not value > 0:
                raise NonPositiveFieldError(f"{name} must be positive, got {value}")


def clops(inp: ClopsInput) -> float:
    """Circuit layer operations per second: M*K*S*D / time."""
    return inp.M * inp.K * inp.S * inp.D / inp.time_taken


def benchmark_pass(score: float, threshold: float) -> bool:
    return bool(score > threshold)
