"""Gate matrices and single-qubit resynthesis into the native {RZ, SX, X} basis."""
from __future__ import annotations

import cmath
import math

import numpy as np

from .circuit import GateKind, Op

_S2 = 1 / math.sqrt(2)
_FIXED = {
    GateKind.H: np.array([[_S2, _S2], [_S2, -_S2]], dtype=complex),
    GateKind.X: np.array([[0, 1], [1, 0]], dtype=complex),
    GateKind.SX: 0.5 * np.array([[1 + 1j, 1 - 1j], [1 - 1j, 1 + 1j]], dtype=complex),
}

ANGLE_ATOL = 1e-9


def rz_matrix(theta: float) -> np.ndarray:
    return np.array([[cmath.exp(-0.5j * theta), 0], [0, cmath.exp(0.5j * theta)]], dtype=complex)


def rx_matrix(theta: float) -> np.ndarray:
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)


def u_matrix(theta: float, phi: float, lam: float) -> np.ndarray:
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array([[c, -cmath.exp(1j * lam) * s],
                     [cmath.exp(1j * phi) * s, cmath.exp(1j * (phi + lam)) * c]], dtype=complex)


def matrix_1q(op: Op) -> np.ndarray:
    k = op.kind
    if k in _FIXED:
        return _FIXED[k]
    if k is GateKind.RZ:
        return rz_matrix(op.params[0])
    if k is GateKind.RX:
        return rx_matrix(op.params[0])
    if k is GateKind.U:
        return u_matrix(*op.params)
    raise ValueError(f"{k.value} is not a single-qubit unitary")


def matrix_2q(op: Op) -> np.ndarray:
    """4x4 matrix in the basis |q1 q0> where q0 = op.qubits[0] is the low bit."""
    k = op.kind
    if k is GateKind.CX:
        m = np.eye(4, dtype=complex)
        m[[1, 3]] = m[[3, 1]]
        return m
    if k is GateKind.CP:
        return np.diag([1, 1, 1, cmath.exp(1j * op.params[0])]).astype(complex)
    if k is GateKind.SWAP:
        m = np.eye(4, dtype=complex)
        m[[1, 2]] = m[[2, 1]]
        return m
    raise ValueError(f"{k.value} is not a two-qubit unitary")


def zyz_angles(u: np.ndarray) -> tuple[float, float, float]:
    """(theta, phi, lam) with u ~ U(theta, phi, lam) up to global phase."""
    v = u / cmath.sqrt(np.linalg.det(u))
    theta = 2 * math.atan2(abs(v[1, 0]), abs(v[0, 0]))
    a11 = cmath.phase(v[1, 1])
    a10 = cmath.phase(v[1, 0])
    return theta, a11 + a10, a11 - a10


def wrap_angle(a: float) -> float:
    """Map into (-pi, pi]."""
    a = math.remainder(a, 2 * math.pi)
    return math.pi if a <= -math.pi else a


def is_zero_angle(a: float) -> bool:
    return abs(wrap_angle(a)) < ANGLE_ATOL


def equal_up_to_phase(a: np.ndarray, b: np.ndarray, atol: float = 1e-9) -> bool:
    idx = np.unravel_index(np.argmax(np.abs(b)), b.shape)
    if abs(b[idx]) < atol:
        return bool(np.allclose(a, b, atol=atol))
    phase = a[idx] / b[idx]
    if abs(abs(phase) - 1) > atol:
        return False
    return bool(np.allclose(a, phase * b, atol=atol))


def _rz(theta, q):
    return Op(GateKind.RZ, (q,), (wrap_angle(theta),))


def _drop_zero(ops):
    return [op for op in ops if not (op.kind is GateKind.RZ and is_zero_angle(op.params[0]))]


def synthesize_1q(u: np.ndarray, q: int) -> list[Op]:
    """Shortest native sequence (time order) equal to `u` up to global phase.

    Tries identity, RZ, anti-diagonal (RZ then X), the one-SX form and finally
    the general RZ.SX.RZ.SX.RZ form; each candidate is checked numerically.
    """
    v = u / cmath.sqrt(np.linalg.det(u))
    if abs(v[1, 0]) < ANGLE_ATOL:
        seq = _drop_zero([_rz(2 * cmath.phase(v[1, 1]), q)])
        if _check(seq, u):
            return seq
    if abs(v[0, 0]) < ANGLE_ATOL:
        seq = _drop_zero([_rz(cmath.phase(v[0, 1] / v[1, 0]), q),
                          Op(GateKind.X, (q,))])
        if _check(seq, u):
            return seq
    theta, phi, lam = zyz_angles(u)
    if abs(theta - math.pi / 2) < ANGLE_ATOL:
        seq = _drop_zero([_rz(lam - math.pi / 2, q), Op(GateKind.SX, (q,)), _rz(phi + math.pi / 2, q)])
        if _check(seq, u):
            return seq
    seq = _drop_zero([_rz(lam, q), Op(GateKind.SX, (q,)), _rz(theta + math.pi, q),
                      Op(GateKind.SX, (q,)), _rz(phi + math.pi, q)])
    if not _check(seq, u):
        raise ArithmeticError("single-qubit resynthesis failed")
    return seq


def sequence_matrix(ops) -> np.ndarray:
    m = np.eye(2, dtype=complex)
    for op in ops:
        m = matrix_1q(op) @ m
    return m


def _check(seq, u) -> bool:
    return equal_up_to_phase(sequence_matrix(seq), u, atol=1e-8)
