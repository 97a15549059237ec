"""Quantum-kernel feature map (encoding half only) for 4x4 grayscale digits."""
from __future__ import annotations

import csv
import os
from importlib import resources

import numpy as np

from ..circuit import Circuit, GateOp, cx, rx, ry, rz

NUM_QUBITS = 8
NUM_FEATURES = 2 * NUM_QUBITS
PIXEL_MAX = 255.0
ENTANGLEMENTS = ("linear", "ring", "full")

# Fixed trainable-block angles; the training loop is not part of the benchmark.
DEFAULT_THETAS = (0.35, 1.1, -0.6, 0.9, -1.3, 0.45, 1.6, -0.8)


class FeatureFileError(ValueError):
    pass


def ingest_features(path: str | os.PathLike | None = None) -> list[np.ndarray]:
    """Read pre-downscaled 16-pixel rows and rescale [0, 255] linearly onto [0, pi]."""
    if path is None:
        text = resources.files(__package__).joinpath("data", "digits_4x4.csv").read_text("utf-8")
        lines = text.splitlines()
        source = "digits_4x4.csv"
    else:
        with open(path, encoding="utf-8", newline="") as fh:
            lines = fh.read().splitlines()
        source = os.fspath(path)
    rows = []
    for lineno, row in enumerate(csv.reader(lines), start=1):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != NUM_FEATURES:
            raise FeatureFileError(f"{source}:{lineno}: expected {NUM_FEATURES} columns, got {len(row)}")
        try:
            values = np.array([float(cell) for cell in row])
        except ValueError as exc:
            raise FeatureFileError(f"{source}:{lineno}: non-numeric cell ({exc})") from None
        if not np.all(np.isfinite(values)) or values.min() < 0 or values.max() > PIXEL_MAX:
            raise FeatureFileError(f"{source}:{lineno}: values must lie in [0, {PIXEL_MAX:g}]")
        rows.append(values * (np.pi / PIXEL_MAX))
    return rows


def entangling_pairs(n: int, entanglement: str = "linear") -> list[tuple[int, int]]:
    if entanglement == "linear":
        return [(i, i + 1) for i in range(n - 1)]
    if entanglement == "ring":
        return [(i, i + 1) for i in range(n - 1)] + ([(n - 1, 0)] if n > 2 else [])
    if entanglement == "full":
        return [(i, j) for i in range(n) for j in range(i + 1, n)]
    raise ValueError(f"entanglement must be one of {ENTANGLEMENTS}, got {entanglement!r}")


def qsvm_featuremap_circuit(features, thetas=DEFAULT_THETAS, entanglement: str = "linear",
                            name: str = "qsvm_n8") -> Circuit:
    """RX/RZ data encoding (two features per qubit), CNOT entangler, RY layer."""
    f = np.asarray(features, dtype=float).reshape(-1)
    if f.size != NUM_FEATURES:
        raise ValueError(f"expected {NUM_FEATURES} features, got {f.size}")
    thetas = tuple(float(t) for t in thetas)
    if len(thetas) != NUM_QUBITS:
        raise ValueError(f"expected {NUM_QUBITS} theta angles, got {len(thetas)}")
    ops: list[GateOp] = []
    for q in range(NUM_QUBITS):
        ops += [rx(q, f[2 * q]), rz(q, f[2 * q + 1])]
    ops += [cx(a, b) for a, b in entangling_pairs(NUM_QUBITS, entanglement)]
    ops += [ry(q, thetas[q]) for q in range(NUM_QUBITS)]
    return Circuit(NUM_QUBITS, tuple(ops), name, measured=True)
