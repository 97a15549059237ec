"""Two-qubit unitary synthesis with at most three CNOTs, and Haar sampling.

The synthesis works in the magic basis, where local gates ``SU(2) x SU(2)``
become real orthogonal matrices. The number of CNOTs is read off the spectrum
of ``gamma(U) = u u^T`` (``u`` the magic-basis image of ``U``); a fixed CNOT
skeleton ``V`` with matching spectrum is then built and the local prefactors
solving ``U = (A x B) V (C x D)`` are recovered by simultaneously diagonalising
``gamma(U)`` and ``gamma(V)`` with real orthogonal matrices.

Matrices here use "wire" order: the first wire is the most-significant bit.
``kak_decompose`` maps circuit qubit 1 to wire 0 and qubit 0 to wire 1 so that
an input written in the package convention (qubit 0 = least-significant bit)
is reproduced by the returned circuit.
"""
from __future__ import annotations

import numpy as np

from ..circuit import Circuit, GateOp, cx, phase_aligned_deviation, rx, ry, rz, rx_matrix, \
    ry_matrix, rz_matrix, unitary_of

_E = np.array([[1, 1j, 0, 0], [0, 0, 1j, 1], [0, 0, 1j, -1], [1, -1j, 0, 0]]) / np.sqrt(2)
_EDAG = _E.conj().T
_CNOT01 = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)
_CNOT10 = np.array([[1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0], [0, 1, 0, 0]], dtype=complex)
_SWAP = np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex)

UNITARY_ATOL = 1e-10
_TOL = 1e-7


class NonUnitaryError(ValueError):
    pass


def haar_random_su4(seed: int | np.random.SeedSequence | None) -> np.ndarray:
    """Haar-distributed 4x4 unitary: QR of a complex Ginibre matrix with phase fix."""
    rng = np.random.default_rng(seed)
    z = (rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def is_unitary(u: np.ndarray, atol: float = UNITARY_ATOL) -> bool:
    u = np.asarray(u)
    return u.ndim == 2 and u.shape[0] == u.shape[1] and np.allclose(
        u @ u.conj().T, np.eye(u.shape[0]), atol=atol, rtol=0)


def zyz_angles(u: np.ndarray) -> tuple[float, float, float]:
    """Angles ``(lam, theta, phi)`` with ``u ~ RZ(phi) RY(theta) RZ(lam)`` up to phase."""
    v = u / np.sqrt(np.linalg.det(u))
    theta = 2 * np.arctan2(abs(v[1, 0]), abs(v[0, 0]))
    a = np.angle(v[1, 1]) if abs(v[1, 1]) > 1e-12 else 0.0
    b = np.angle(v[1, 0]) if abs(v[1, 0]) > 1e-12 else 0.0
    return float(a - b), float(theta), float(a + b)


def one_qubit_ops(u: np.ndarray, q: int) -> list[GateOp]:
    lam, theta, phi = zyz_angles(u)
    return [rz(q, lam), ry(q, theta), rz(q, phi)]


def _to_su4(u: np.ndarray) -> np.ndarray:
    return u * np.exp(-1j * np.angle(np.linalg.det(u)) / 4)


def _gamma(u: np.ndarray) -> np.ndarray:
    m = _EDAG @ u @ _E
    return m @ m.T


def num_cnots_required(u: np.ndarray) -> int:
    """Minimal CNOT count (0-3) for an SU(4) matrix, from the trace of gamma."""
    g = _gamma(u)
    tr = np.trace(g)
    if abs(tr - 4) < _TOL or abs(tr + 4) < _TOL:
        return 0
    ev = np.sort(np.linalg.eigvals(g).imag)
    if abs(tr) < _TOL and np.allclose(ev, [-1, -1, 1, 1], atol=_TOL):
        return 1
    if abs(tr.imag) < _TOL:
        return 2
    return 3


def split_tensor_product(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Factor ``m = a kron b`` for a 4x4 product of 2x2 unitaries."""
    blocks = [[m[2 * i:2 * i + 2, 2 * j:2 * j + 2] for j in range(2)] for i in range(2)]
    i, j = max(((i, j) for i in range(2) for j in range(2)),
               key=lambda ij: np.linalg.norm(blocks[ij[0]][ij[1]]))
    ref = blocks[i][j]
    b = ref / (np.linalg.norm(ref) / np.sqrt(2))
    a = np.array([[np.trace(b.conj().T @ blocks[k][l]) / 2 for l in range(2)] for k in range(2)])
    return a, b


def _real_orthogonal_eigvecs(g: np.ndarray, weight: float) -> np.ndarray:
    _, p = np.linalg.eigh(g.real + weight * g.imag)
    if np.linalg.det(p) < 0:
        p[:, -1] *= -1
    return p


def _local_prefactors(u: np.ndarray, v: np.ndarray):
    """Find 2x2 ``a, b, c, d`` with ``u = (a x b) v (c x d)``; u, v in SU(4), same spectrum."""
    um = _EDAG @ u @ _E
    vm = _EDAG @ v @ _E
    gu, gv = um @ um.T, vm @ vm.T
    best = None
    for weight in (1.0, 0.5772156649, 1.6180339887, 2.7182818284, 0.1234567, 3.14159265):
        p = _real_orthogonal_eigvecs(gu, weight)
        q = _real_orthogonal_eigvecs(gv, weight)
        g = (p @ q.T).astype(complex)
        hm = vm.conj().T @ g.T @ um
        residual = np.max(np.abs(g @ vm @ hm - um)) + np.max(np.abs(hm.imag))
        if best is None or residual < best[0]:
            best = (residual, g, hm)
        if residual < 1e-11:
            break
    _, g, hm = best
    a, b = split_tensor_product(_E @ g @ _EDAG)
    c, d = split_tensor_product(_E @ hm.real @ _EDAG)
    return a, b, c, d


def _wire_ops(u: np.ndarray, wires: tuple[int, int]) -> list[GateOp]:
    w0, w1 = wires
    n = num_cnots_required(u)
    if n == 0:
        a, b = split_tensor_product(u)
        return one_qubit_ops(a, w0) + one_qubit_ops(b, w1)
    if n == 1:
        swap_u = np.exp(0.25j * np.pi) * _SWAP @ u
        a, b, c, d = _local_prefactors(swap_u, _SWAP @ _CNOT01)
        # SWAP (a x b) SWAP = b x a
        return (one_qubit_ops(c, w0) + one_qubit_ops(d, w1) + [cx(w0, w1)]
                + one_qubit_ops(b, w0) + one_qubit_ops(a, w1))
    if n == 2:
        ev = np.linalg.eigvals(_gamma(u))
        if np.allclose(np.sort(ev.real), [-1, -1, 1, 1], atol=_TOL):
            inner = np.kron(rz_matrix(np.pi / 2), rx_matrix(np.pi / 2))
            mid = [rz(w0, np.pi / 2), rx(w1, np.pi / 2)]
        else:
            xa, ya = np.angle(ev[0]), np.angle(ev[1])
            if abs(xa + ya) < _TOL:
                ya = np.angle(ev[2])
            delta, phi = (xa + ya) / 2, (xa - ya) / 2
            inner = np.kron(rz_matrix(delta), rx_matrix(phi))
            mid = [rz(w0, delta), rx(w1, phi)]
        v = _CNOT10 @ inner @ _CNOT10
        a, b, c, d = _local_prefactors(u, v)
        return (one_qubit_ops(c, w0) + one_qubit_ops(d, w1) + [cx(w1, w0)] + mid
                + [cx(w1, w0)] + one_qubit_ops(a, w0) + one_qubit_ops(b, w1))
    return _three_cnot_ops(u, wires)


def _three_cnot_ops(u: np.ndarray, wires: tuple[int, int]) -> list[GateOp]:
    w0, w1 = wires
    swap_u = np.exp(0.25j * np.pi) * _SWAP @ u
    angles = np.sort(np.angle(np.linalg.eigvals(_gamma(swap_u))))
    xa, ya, za = angles[:3]
    alpha, beta, delta = (xa + ya) / 2, (xa + za) / 2, (za + ya) / 2
    v = np.eye(4, dtype=complex)
    for m in (_CNOT10, np.kron(rz_matrix(delta), ry_matrix(beta)), _CNOT01,
              np.kron(np.eye(2), ry_matrix(alpha)), _CNOT10, _SWAP):
        v = m @ v
    a, b, c, d = _local_prefactors(swap_u, v)
    core = [cx(w1, w0), rz(w0, delta), ry(w1, beta), cx(w0, w1), ry(w1, alpha), cx(w1, w0)]
    return (one_qubit_ops(c, w0) + one_qubit_ops(d, w1) + core
            + one_qubit_ops(a, w1) + one_qubit_ops(b, w0))


def kak_decompose(u: np.ndarray, qubits: tuple[int, int] = (0, 1), num_qubits: int | None = None,
                  name: str = "kak") -> Circuit:
    """Basis-gate circuit reproducing the two-qubit unitary ``u`` up to global phase.

    ``u`` is read in the package convention on ``qubits`` (``qubits[0]`` is the
    least-significant bit). At most three CNOTs are emitted. If the minimal-count
    skeleton does not reproduce ``u`` to 1e-9 (near a degenerate locus), the
    general three-CNOT form is used instead.
    """
    u = np.asarray(u, dtype=complex)
    if u.shape != (4, 4) or not is_unitary(u):
        raise NonUnitaryError("kak_decompose needs a 4x4 unitary matrix")
    su = _to_su4(u)
    # package index = b0 + 2*b1, so qubit 1 is the most-significant wire
    local = (1, 0)
    width = 2
    ops = _wire_ops(su, local)
    if phase_aligned_deviation(unitary_of(Circuit(width, tuple(ops))), u) > 1e-9:
        ops = _three_cnot_ops(su, local)
    mapping = {0: qubits[0], 1: qubits[1]}
    ops = [GateOp(op.tag, tuple(mapping[q] for q in op.qubits), op.params) for op in ops]
    return Circuit(num_qubits or max(qubits) + 1, tuple(ops), name)
