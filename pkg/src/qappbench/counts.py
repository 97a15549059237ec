"""Counts files: the JSON exchange format for measured results."""
from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field
from typing import Any

MIN_SCORED_SHOTS = 1000


class CountsError(ValueError):
    pass


class MalformedCountsError(CountsError):
    pass


class CountSumMismatchError(CountsError):
    pass


class MixedLengthError(CountsError):
    pass


@dataclass(frozen=True)
class CountsFile:
    counts: dict[str, int]
    shots: int
    num_qubits: int
    backend: str = "unknown"
    seed: int | None = None
    wall_time_s: float | None = None
    extra: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        check_counts(self.counts, self.shots, self.num_qubits)

    def frequency(self, key: str) -> float:
        return self.counts.get(key, 0) / self.shots

    def to_json(self) -> dict[str, Any]:
        metadata = {"backend": self.backend, "seed": self.seed, "wall_time_s": self.wall_time_s}
        metadata.update(self.extra)
        return {
            "shots": self.shots,
            "num_qubits": self.num_qubits,
            "counts": {k: self.counts[k] for k in sorted(self.counts)},
            "metadata": metadata,
        }

    @classmethod
    def from_json(cls, data: Any) -> "CountsFile":
        if not isinstance(data, dict):
            raise MalformedCountsError("counts file must hold a JSON object")
        counts = data.get("counts")
        shots = data.get("shots")
        if not isinstance(counts, dict) or not counts:
            raise MalformedCountsError("'counts' must be a non-empty object")
        if not isinstance(shots, int) or isinstance(shots, bool):
            raise MalformedCountsError("'shots' must be an integer")
        lengths = {len(k) for k in counts}
        if len(lengths) != 1:
            raise MixedLengthError(f"bitstrings of mixed lengths {sorted(lengths)}")
        num_qubits = data.get("num_qubits", lengths.pop())
        if not isinstance(num_qubits, int) or isinstance(num_qubits, bool):
            raise MalformedCountsError("'num_qubits' must be an integer")
        metadata = data.get("metadata") or {}
        if not isinstance(metadata, dict):
            raise MalformedCountsError("'metadata' must be an object")
        wall = metadata.get("wall_time_s")
        if wall is not None and not (isinstance(wall, (int, float)) and math.isfinite(wall)):
            raise MalformedCountsError("'metadata.wall_time_s' must be a number or null")
        extra = {k: v for k, v in metadata.items() if k not in ("backend", "seed", "wall_time_s")}
        return cls(counts=dict(counts), shots=shots, num_qubits=num_qubits,
                   backend=str(metadata.get("backend", "unknown")), seed=metadata.get("seed"),
                   wall_time_s=None if wall is None else float(wall), extra=extra)


def check_counts(counts: dict[str, int], shots: int, num_qubits: int) -> None:
    if shots < 1:
        raise MalformedCountsError(f"shots must be positive, got {shots}")
    for key, value in counts.items():
        if not isinstance(key, str) or set(key) - {"0", "1"}:
            raise MalformedCountsError(f"bad bitstring {key!r}")
        if not isinstance(value, int) or isinstance(value, bool) or value < 0:
            raise MalformedCountsError(f"count for {key!r} must be a nonnegative integer")
    lengths = {len(k) for k in counts}
    if len(lengths) > 1:
        raise MixedLengthError(f"bitstrings of mixed lengths {sorted(lengths)}")
    if lengths and lengths != {num_qubits}:
        raise MixedLengthError(f"bitstrings have {lengths.pop()} bits, num_qubits is {num_qubits}")
    total = sum(counts.values())
    if total != shots:
        raise CountSumMismatchError(f"counts sum to {total}, shots is {shots}")


def read_counts(path: str | os.PathLike) -> CountsFile:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise MalformedCountsError(f"{path}: {exc}") from exc
    return CountsFile.from_json(data)


def write_counts(counts: CountsFile, path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(counts.to_json(), fh, indent=2)
        fh.write("\n")


def merge_counts(*parts: CountsFile, backend: str | None = None) -> CountsFile:
    """Pool several counts files over the same register."""
    merged: dict[str, int] = {}
    for part in parts:
        for k, v in part.counts.items():
            merged[k] = merged.get(k, 0) + v
    return CountsFile(merged, sum(p.shots for p in parts), parts[0].num_qubits,
                      backend or parts[0].backend, parts[0].seed)
