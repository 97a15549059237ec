"""Ancilla-free multi-controlled X synthesis over {RX, RY, RZ, CNOT}.

Building blocks:

* ``_toffoli``: the textbook 6-CNOT Toffoli network.
* ``_mcx_dirty``: a k-controlled X using k-2 borrowed ("dirty") qubits; the
  borrowed qubits may hold any state and are returned untouched. Linear size.
* ``_mcx_one_dirty``: k controls plus a single borrowed qubit, obtained by
  splitting the controls in two halves that borrow from each other.
* ``_mc_su2``: a k-controlled SU(2) rotation ``W = A X B X`` (``AB = I``) written
  as ``C(A) . MCX . C(B) . MCX`` where the two MCX gates act on the first k-1
  controls and the target while borrowing the last control.

The exact gate is ``H . C^k(RZ(pi)) . H`` followed by a phase chain fixing the
``i`` that separates ``Z`` from ``RZ(pi)``; each link of that chain is itself a
controlled rotation with one control fewer, which gives the quadratic CNOT
count. Dropping the chain and using ``RY(pi)`` instead yields a Toffoli that is
exact on the computational basis up to relative phases, at linear cost.
"""
from __future__ import annotations

from typing import Sequence

import numpy as np

from ..circuit import Circuit, GateOp, cx, ry, rz

PI = np.pi


def _h(q: int) -> list[GateOp]:
    # H = i * RY(pi/2) RZ(pi)
    return [rz(q, PI), ry(q, PI / 2)]


def _toffoli(a: int, b: int, t: int) -> list[GateOp]:
    tdg, tt = -PI / 4, PI / 4
    return [
        *_h(t), cx(b, t), rz(t, tdg), cx(a, t), rz(t, tt), cx(b, t), rz(t, tdg), cx(a, t),
        rz(b, tt), rz(t, tt), *_h(t), cx(a, b), rz(a, tt), rz(b, tdg), cx(a, b),
    ]


def _margolus(a: int, b: int, t: int) -> list[GateOp]:
    """Relative-phase Toffoli with three CNOTs."""
    return [ry(t, PI / 4), cx(b, t), ry(t, PI / 4), cx(a, t), ry(t, -PI / 4), cx(b, t),
            ry(t, -PI / 4)]


def _mcx_dirty(controls: Sequence[int], target: int, dirty: Sequence[int]) -> list[GateOp]:
    k = len(controls)
    if k == 0:
        return [GateOp("rx", (target,), (PI,))]
    if k == 1:
        return [cx(controls[0], target)]
    if k == 2:
        return _toffoli(controls[0], controls[1], target)
    if len(dirty) < k - 2:
        raise ValueError(f"{k}-controlled X needs {k - 2} borrowed qubits, got {len(dirty)}")
    c, a = list(controls), list(dirty[:k - 2])
    # ladder: targets t, a[k-3], ..., a[0]
    down = [(c[k - 1], a[k - 3], target)]
    down += [(c[i + 2], a[i], a[i + 1]) for i in range(k - 4, -1, -1)]
    apex = (c[0], c[1], a[0])
    ops: list[GateOp] = []
    seq = down + [apex] + down[::-1][:-1]
    seq_inner = down[1:] + [apex] + down[1:][::-1]
    for trip in seq + [down[0]] + seq_inner:
        ops += _toffoli(*trip)
    return ops


def _mcx_one_dirty(controls: Sequence[int], target: int, spare: int) -> list[GateOp]:
    k = len(controls)
    if k <= 2:
        return _mcx_dirty(controls, target, ())
    k1 = (k + 1) // 2
    first, second = list(controls[:k1]), list(controls[k1:])
    # B: t ^= AND(second) & spare ; A: spare ^= AND(first)
    b_ops = _mcx_dirty(second + [spare], target, first)
    a_ops = _mcx_dirty(first, spare, second + [target])
    return b_ops + a_ops + b_ops + a_ops


def _controlled_rotation(axis: str, control: int, target: int, theta: float) -> list[GateOp]:
    rot = rz if axis == "z" else ry
    return [rot(target, theta / 2), cx(control, target), rot(target, -theta / 2), cx(control, target)]


def _mc_su2(axis: str, controls: Sequence[int], target: int, theta: float) -> list[GateOp]:
    """``controls``-controlled rotation by ``theta`` about ``axis`` (z or y)."""
    rot = rz if axis == "z" else ry
    k = len(controls)
    if k == 0:
        return [rot(target, theta)]
    if k == 1:
        return _controlled_rotation(axis, controls[0], target, theta)
    rest, last = list(controls[:-1]), controls[-1]
    inner = _mcx_one_dirty(rest, target, last)
    # X R(a) X = R(-a) for both axes, so W = R(t/2) X R(-t/2) X
    return (inner + _controlled_rotation(axis, last, target, -theta / 2) + inner
            + _controlled_rotation(axis, last, target, theta / 2))


def _mc_phase(controls: Sequence[int], target: int, phi: float) -> list[GateOp]:
    """Multiply |1...1> on ``controls + [target]`` by ``exp(i phi)`` (up to global phase)."""
    # P(phi) = exp(i phi/2) RZ(phi); the phase becomes a P(phi/2) one control down
    ops = _mc_su2("z", controls, target, phi)
    if controls:
        ops += _mc_phase(controls[:-1], controls[-1], phi / 2)
    return ops


def mcx_exact_ops(controls: Sequence[int], target: int) -> list[GateOp]:
    controls = list(controls)
    if len(controls) == 1:
        return [cx(controls[0], target)]
    if len(controls) == 2:
        return _toffoli(controls[0], controls[1], target)
    # X = H Z H and Z = i RZ(pi)
    return (_h(target) + _mc_su2("z", controls, target, PI) + _h(target)
            + _mc_phase(controls[:-1], controls[-1], PI / 2))


def mcx_relative_phase_ops(controls: Sequence[int], target: int) -> list[GateOp]:
    controls = list(controls)
    if len(controls) == 1:
        return [cx(controls[0], target)]
    if len(controls) == 2:
        return _margolus(controls[0], controls[1], target)
    # RY(pi) = X Z, so this is MCX up to a controlled-Z phase
    return _mc_su2("y", controls, target, PI)


MIN_TOFFOLI, MAX_TOFFOLI = 3, 8


def _check_range(n: int) -> None:
    if not MIN_TOFFOLI <= n <= MAX_TOFFOLI:
        raise ValueError(f"Toffoli width must be in [{MIN_TOFFOLI}, {MAX_TOFFOLI}], got {n}")


def toffoli_exact(n: int) -> Circuit:
    """n-qubit Toffoli: qubit 0 is the target, qubits 1..n-1 the controls."""
    _check_range(n)
    from .rebase import simplify
    return simplify(Circuit(n, tuple(mcx_exact_ops(range(1, n), 0)), f"toffoli{n}_exact"))


def toffoli_approx(n: int) -> Circuit:
    """Relative-phase n-qubit Toffoli with the same truth table as ``toffoli_exact``."""
    _check_range(n)
    from .rebase import simplify
    return simplify(Circuit(n, tuple(mcx_relative_phase_ops(range(1, n), 0)), f"toffoli{n}_approx"))
