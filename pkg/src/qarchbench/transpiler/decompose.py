"""Rewrite circuits into the native {RZ, SX, X, CX} basis."""
from __future__ import annotations

from ..circuit import NATIVE_KINDS, Circuit, CircuitError, GateKind, Op
from ..gates import matrix_1q, synthesize_1q, wrap_angle


def _rz(theta, q):
    return Op(GateKind.RZ, (q,), (wrap_angle(theta),))


def swap_as_cx(a: int, b: int) -> list[Op]:
    return [Op(GateKind.CX, (a, b)), Op(GateKind.CX, (b, a)), Op(GateKind.CX, (a, b))]


def cp_as_cx(theta: float, c: int, t: int) -> list[Op]:
    return [_rz(theta / 2, c), Op(GateKind.CX, (c, t)), _rz(-theta / 2, t),
            Op(GateKind.CX, (c, t)), _rz(theta / 2, t)]


def decompose_op(op: Op) -> list[Op]:
    k = op.kind
    if k in NATIVE_KINDS:
        return [op]
    if k is GateKind.SWAP:
        return swap_as_cx(*op.qubits)
    if k is GateKind.CP:
        return cp_as_cx(op.params[0], *op.qubits)
    if k in (GateKind.H, GateKind.U, GateKind.RX):
        return synthesize_1q(matrix_1q(op), op.qubits[0])
    raise CircuitError(f"cannot decompose {k.value}")


def decompose_to_native(circuit: Circuit) -> Circuit:
    ops = []
    for op in circuit.ops:
        ops.extend(decompose_op(op))
    return circuit.with_ops(ops)


def decompose_swaps(ops) -> list[Op]:
    """Expand SWAPs into 3 CX, oriented so the first CX can cancel against the
    preceding CX on the same pair when there is one."""
    out: list[Op] = []
    last: dict[int, int] = {}
    for op in ops:
        if op.kind is GateKind.SWAP:
            a, b = op.qubits
            ia, ib = last.get(a), last.get(b)
            if ia is not None and ia == ib and out[ia].kind is GateKind.CX and out[ia].qubits == (b, a):
                a, b = b, a
            block = swap_as_cx(a, b)
            for k, g in enumerate(block):
                last[a] = last[b] = len(out)
                out.append(g)
            continue
        for q in op.qubits:
            last[q] = len(out)
        out.append(op)
    return out
