"""Job-shop scheduling -> time-indexed QUBO -> QAOA circuit.

One binary variable per (job, operation, start time) that fits in the window
allowed by the horizon and the durations of the job's other operations.
Variable ``i`` is carried by qubit ``i``; a measured bit 1 means "starts here".
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from ..circuit import Circuit, GateOp, cx, h, rx, rz
from .pauli import PauliSum, PauliTerm


class InfeasibleHorizonError(ValueError):
    pass


@dataclass(frozen=True)
class JsspInstance:
    """``jobs[j]`` is the ordered list of ``(machine, duration)`` operations of job j."""

    jobs: tuple[tuple[tuple[int, int], ...], ...]
    horizon: int

    def __post_init__(self):
        object.__setattr__(self, "jobs", tuple(tuple((int(m), int(d)) for m, d in job)
                                               for job in self.jobs))
        for job in self.jobs:
            for _, d in job:
                if d < 1:
                    raise ValueError("operation durations must be at least 1")


# Reference instance: J1 = (M1, 1) then (M2, 2); J2 = (M1, 1); J3 = (M2, 2); horizon 3.
REFERENCE_INSTANCE = JsspInstance(jobs=(((1, 1), (2, 2)), ((1, 1),), ((2, 2),)), horizon=3)
CLAIMED_MAKESPAN = 3
REFERENCE_DEPTH = 24


@dataclass(frozen=True)
class Qubo:
    linear: dict[int, float]
    quadratic: dict[tuple[int, int], float]
    offset: float
    labels: tuple[tuple[int, int, int], ...]
    weights: dict[str, float] = field(default_factory=dict)

    @property
    def num_variables(self) -> int:
        return len(self.labels)

    def energy(self, bits) -> float:
        """Energy of an assignment given as a 0/1 sequence or an outcome index."""
        if isinstance(bits, (int, np.integer)):
            bits = [(int(bits) >> i) & 1 for i in range(self.num_variables)]
        e = self.offset
        for i, c in self.linear.items():
            e += c * bits[i]
        for (i, j), c in self.quadratic.items():
            e += c * bits[i] * bits[j]
        return e

    def energies(self) -> np.ndarray:
        """Energy of every assignment, indexed like outcome bitstrings."""
        return np.array([self.energy(i) for i in range(2 ** self.num_variables)])

    def to_ising(self) -> PauliSum:
        """Substitute x = (1 - Z)/2."""
        const = self.offset
        z: dict[int, float] = {}
        zz: dict[tuple[int, int], float] = {}
        for i, c in self.linear.items():
            const += c / 2
            z[i] = z.get(i, 0.0) - c / 2
        for (i, j), c in self.quadratic.items():
            const += c / 4
            z[i] = z.get(i, 0.0) - c / 4
            z[j] = z.get(j, 0.0) - c / 4
            zz[(i, j)] = zz.get((i, j), 0.0) + c / 4
        terms = [PauliTerm(c, {i: "Z"}) for i, c in sorted(z.items()) if c != 0]
        terms += [PauliTerm(c, {i: "Z", j: "Z"}) for (i, j), c in sorted(zz.items()) if c != 0]
        return PauliSum(tuple(terms), const)


def start_windows(instance: JsspInstance) -> list[list[range]]:
    """Feasible start times per operation from horizon and job precedence."""
    windows = []
    for job in instance.jobs:
        durations = [d for _, d in job]
        job_windows = []
        for k in range(len(job)):
            earliest = sum(durations[:k])
            latest = instance.horizon - sum(durations[k:])
            job_windows.append(range(earliest, latest + 1))
        windows.append(job_windows)
    return windows


def jssp_to_qubo(instance: JsspInstance, penalty: float | None = None,
                 one_start_penalty: float | None = None) -> Qubo:
    """Time-indexed QUBO.

    Objective: completion time ``t + d`` of each job's final operation.
    Penalties: ``penalty`` (default twice the largest objective coefficient) per
    same-machine overlap and per precedence violation; ``one_start_penalty`` on
    ``(1 - sum x)^2`` for every operation. Its default is twice the largest
    energy a single variable can shed by switching off (objective plus all its
    conflict penalties), which keeps every minimum one-start feasible.
    """
    labels: list[tuple[int, int, int]] = []
    for j, job_windows in enumerate(start_windows(instance)):
        for k, window in enumerate(job_windows):
            if len(window) == 0:
                raise InfeasibleHorizonError(
                    f"job {j} operation {k} has no feasible start before horizon {instance.horizon}")
            labels.extend((j, k, t) for t in window)
    index = {lab: i for i, lab in enumerate(labels)}

    objective: dict[int, float] = {}
    for (j, k, t), i in index.items():
        job = instance.jobs[j]
        if k == len(job) - 1:
            objective[i] = float(t + job[k][1])
    max_obj = max((abs(c) for c in objective.values()), default=1.0) or 1.0
    if penalty is None:
        penalty = 2.0 * max_obj

    conflicts: dict[tuple[int, int], float] = {}
    for (j1, k1, t1), (j2, k2, t2) in itertools.combinations(labels, 2):
        m1, d1 = instance.jobs[j1][k1]
        m2, d2 = instance.jobs[j2][k2]
        i1, i2 = index[(j1, k1, t1)], index[(j2, k2, t2)]
        key = (min(i1, i2), max(i1, i2))
        if (j1, k1) != (j2, k2) and m1 == m2 and t1 < t2 + d2 and t2 < t1 + d1:
            conflicts[key] = conflicts.get(key, 0.0) + penalty
        if j1 == j2 and abs(k1 - k2) == 1:
            (ka, ta), (kb, tb) = sorted([(k1, t1), (k2, t2)])
            if tb < ta + instance.jobs[j1][ka][1]:
                conflicts[key] = conflicts.get(key, 0.0) + penalty

    if one_start_penalty is None:
        shed = [objective.get(i, 0.0) + sum(c for pair, c in conflicts.items() if i in pair)
                for i in range(len(labels))]
        one_start_penalty = 2.0 * max(max(shed), max_obj)

    linear = {i: objective.get(i, 0.0) for i in range(len(labels))}
    quadratic = dict(conflicts)
    offset = 0.0
    groups: dict[tuple[int, int], list[int]] = {}
    for (j, k, _), i in index.items():
        groups.setdefault((j, k), []).append(i)
    for members in groups.values():
        offset += one_start_penalty
        for i in members:
            linear[i] -= one_start_penalty
        for a, b in itertools.combinations(members, 2):
            quadratic[(a, b)] = quadratic.get((a, b), 0.0) + 2 * one_start_penalty
    return Qubo(linear, quadratic, offset, tuple(labels),
                {"penalty": penalty, "one_start_penalty": one_start_penalty})


def one_start_satisfied(qubo: Qubo, bits) -> bool:
    if isinstance(bits, (int, np.integer)):
        bits = [(int(bits) >> i) & 1 for i in range(qubo.num_variables)]
    starts: dict[tuple[int, int], int] = {}
    for (j, k, _), b in zip(qubo.labels, bits):
        starts[(j, k)] = starts.get((j, k), 0) + b
    return all(v == 1 for v in starts.values())


def decode_schedule(qubo: Qubo, bits) -> dict[tuple[int, int], int]:
    if isinstance(bits, (int, np.integer)):
        bits = [(int(bits) >> i) & 1 for i in range(qubo.num_variables)]
    return {(j, k): t for (j, k, t), b in zip(qubo.labels, bits) if b}


def schedule_is_feasible(instance: JsspInstance, starts: dict[tuple[int, int], int]) -> bool:
    ops = [(j, k) for j, job in enumerate(instance.jobs) for k in range(len(job))]
    if set(starts) != set(ops):
        return False
    for j, job in enumerate(instance.jobs):
        for k in range(1, len(job)):
            if starts[(j, k)] < starts[(j, k - 1)] + job[k - 1][1]:
                return False
    for a, b in itertools.combinations(ops, 2):
        (ma, da), (mb, db) = instance.jobs[a[0]][a[1]], instance.jobs[b[0]][b[1]]
        if ma == mb and starts[a] < starts[b] + db and starts[b] < starts[a] + da:
            return False
    return True


def optimal_makespan(instance: JsspInstance) -> int:
    """Exhaustive search over integer start times (small instances only)."""
    ops = [(j, k) for j, job in enumerate(instance.jobs) for k in range(len(job))]
    total = sum(d for job in instance.jobs for _, d in job)
    best = None
    for starts in itertools.product(range(total + 1), repeat=len(ops)):
        sched = dict(zip(ops, starts))
        if not schedule_is_feasible(instance, sched):
            continue
        span = max(sched[(j, k)] + instance.jobs[j][k][1] for j, k in ops)
        best = span if best is None else min(best, span)
    return best


@dataclass(frozen=True)
class QaoaParams:
    gammas: tuple[float, ...]
    betas: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "gammas", tuple(float(g) for g in self.gammas))
        object.__setattr__(self, "betas", tuple(float(b) for b in self.betas))
        if len(self.gammas) != len(self.betas) or not self.gammas:
            raise ValueError("gammas and betas must be non-empty and of equal length")

    @property
    def p(self) -> int:
        return len(self.gammas)


def default_qaoa_params() -> QaoaParams:
    data = json.loads(resources.files(__package__).joinpath("data", "qaoa_params.json")
                      .read_text("utf-8"))
    return QaoaParams(tuple(data["gammas"]), tuple(data["betas"]))


def qaoa_circuit(qubo: Qubo, params: QaoaParams | None = None) -> Circuit:
    """|+>^n, then p rounds of exp(-i gamma H_P) and exp(-i beta sum X)."""
    params = params or default_qaoa_params()
    n = qubo.num_variables
    ising = qubo.to_ising()
    ops: list[GateOp] = [h(q) for q in range(n)]
    for gamma, beta in zip(params.gammas, params.betas):
        for term in ising.terms:
            qs = sorted(term.paulis)
            if len(qs) == 2:
                a, b = qs
                ops += [cx(a, b), rz(b, 2 * gamma * term.coefficient), cx(a, b)]
        for term in ising.terms:
            if len(term.paulis) == 1:
                (q,) = term.paulis
                ops.append(rz(q, 2 * gamma * term.coefficient))
        ops += [rx(q, 2 * beta) for q in range(n)]
    return Circuit(n, tuple(ops), f"qaoa_n{n}_p{params.p}", measured=True)
