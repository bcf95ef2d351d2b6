"""
Circuit intermediate representation.

Contains:
    - GateKind: supported gate vocabulary
    - Op: one gate application (kind, qubits, params, optional clbit)
    - Circuit: immutable, validated op sequence
    - CircuitBuilder: chainable builder producing a Circuit
    - depth / layers / gate_counts: dependency-DAG analysis
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum


class GateKind(str, Enum):
    H = "h"
    X = "x"
    SX = "sx"
    RZ = "rz"
    RX = "rx"
    U = "u"
    CX = "cx"
    CP = "cp"
    SWAP = "swap"
    MEASURE = "measure"
    BARRIER = "barrier"

    @property
    def arity(self) -> int | None:
        """Fixed qubit count, or None for BARRIER (spans any number of qubits)."""
        if self is GateKind.BARRIER:
            return None
        return 2 if self in _TWO_QUBIT else 1

    @property
    def num_params(self) -> int:
        return _NUM_PARAMS.get(self, 0)

    @property
    def is_unitary(self) -> bool:
        return self not in (GateKind.MEASURE, GateKind.BARRIER)


_TWO_QUBIT = frozenset({GateKind.CX, GateKind.CP, GateKind.SWAP})
_NUM_PARAMS = {GateKind.RZ: 1, GateKind.RX: 1, GateKind.CP: 1, GateKind.U: 3}

NATIVE_KINDS = frozenset({GateKind.RZ, GateKind.SX, GateKind.X, GateKind.CX,
                          GateKind.MEASURE, GateKind.BARRIER})


class CircuitError(ValueError):
    pass


@dataclass(frozen=True, slots=True)
class Op:
    kind: GateKind
    qubits: tuple[int, ...]
    params: tuple[float, ...] = ()
    clbit: int | None = None

    @property
    def is_two_qubit(self) -> bool:
        return self.kind in _TWO_QUBIT

    def remap(self, mapping) -> Op:
        return Op(self.kind, tuple(mapping[q] for q in self.qubits), self.params, self.clbit)


@dataclass(frozen=True)
class Circuit:
    num_qubits: int
    ops: tuple[Op, ...] = ()
    num_clbits: int = 0
    name: str = field(default="", compare=False)

    def __post_init__(self):
        if not isinstance(self.ops, tuple):
            object.__setattr__(self, "ops", tuple(self.ops))
        if self.num_qubits < 0 or self.num_clbits < 0:
            raise CircuitError("register sizes must be non-negative")
        for i, op in enumerate(self.ops):
            _validate_op(op, self.num_qubits, self.num_clbits, i)

    def __len__(self) -> int:
        return len(self.ops)

    def __iter__(self):
        return iter(self.ops)

    def with_ops(self, ops, num_qubits: int | None = None) -> Circuit:
        return Circuit(self.num_qubits if num_qubits is None else num_qubits,
                       tuple(ops), self.num_clbits, self.name)

    def compose(self, other: Circuit) -> Circuit:
        """Append `other` (same register sizes or smaller) after this circuit."""
        return Circuit(max(self.num_qubits, other.num_qubits), self.ops + other.ops,
                       max(self.num_clbits, other.num_clbits), self.name)

    def inverse(self) -> Circuit:
        """Adjoint of a measurement-free circuit."""
        return self.with_ops(_inverse_op(op) for op in reversed(self.ops))

    def active_qubits(self) -> list[int]:
        return sorted({q for op in self.ops for q in op.qubits})


def _validate_op(op: Op, nq: int, nc: int, index: int) -> None:
    arity = op.kind.arity
    if arity is None:
        if not op.qubits:
            raise CircuitError(f"op {index}: barrier needs at least one qubit")
    elif len(op.qubits) != arity:
        raise CircuitError(f"op {index}: {op.kind.value} expects {arity} qubit(s), got {len(op.qubits)}")
    if len(set(op.qubits)) != len(op.qubits):
        raise CircuitError(f"op {index}: repeated qubit in {op.kind.value}{op.qubits}")
    for q in op.qubits:
        if not 0 <= q < nq:
            raise CircuitError(f"op {index}: qubit {q} out of range for {nq}-qubit circuit")
    if len(op.params) != op.kind.num_params:
        raise CircuitError(f"op {index}: {op.kind.value} expects {op.kind.num_params} parameter(s)")
    if not all(math.isfinite(p) for p in op.params):
        raise CircuitError(f"op {index}: non-finite angle")
    if op.kind is GateKind.MEASURE:
        if op.clbit is None or not 0 <= op.clbit < nc:
            raise CircuitError(f"op {index}: clbit {op.clbit} out of range for {nc} clbits")
    elif op.clbit is not None:
        raise CircuitError(f"op {index}: only measure writes a clbit")


def _inverse_op(op: Op) -> Op:
    k = op.kind
    if k in (GateKind.H, GateKind.X, GateKind.CX, GateKind.SWAP, GateKind.BARRIER):
        return op
    if k in (GateKind.RZ, GateKind.RX, GateKind.CP):
        return Op(k, op.qubits, (-op.params[0],))
    if k is GateKind.U:
        theta, phi, lam = op.params
        return Op(k, op.qubits, (-theta, -lam, -phi))
    if k is GateKind.SX:
        # sx^dagger = rz(pi) sx rz(pi) up to global phase; expressed with u
        return Op(GateKind.U, op.qubits, (-math.pi / 2, -math.pi / 2, math.pi / 2))
    raise CircuitError(f"{k.value} has no inverse")


class CircuitBuilder:
    """Chainable builder: ``CircuitBuilder(2).h(0).cx(0, 1).build()``."""

    def __init__(self, num_qubits: int, num_clbits: int = 0, name: str = ""):
        self.num_qubits = num_qubits
        self.num_clbits = num_clbits
        self.name = name
        self.ops: list[Op] = []

    def append(self, kind: GateKind, qubits, params=(), clbit=None) -> CircuitBuilder:
        self.ops.append(Op(kind, tuple(qubits), tuple(float(p) for p in params), clbit))
        return self

    def h(self, q): return self.append(GateKind.H, (q,))
    def x(self, q): return self.append(GateKind.X, (q,))
    def sx(self, q): return self.append(GateKind.SX, (q,))
    def rz(self, theta, q): return self.append(GateKind.RZ, (q,), (theta,))
    def rx(self, theta, q): return self.append(GateKind.RX, (q,), (theta,))
    def u(self, theta, phi, lam, q): return self.append(GateKind.U, (q,), (theta, phi, lam))
    def cx(self, c, t): return self.append(GateKind.CX, (c, t))
    def cp(self, theta, c, t): return self.append(GateKind.CP, (c, t), (theta,))
    def swap(self, a, b): return self.append(GateKind.SWAP, (a, b))
    def barrier(self, *qubits): return self.append(GateKind.BARRIER, qubits or range(self.num_qubits))

    def measure(self, q, c):
        return self.append(GateKind.MEASURE, (q,), (), c)

    def extend(self, ops) -> CircuitBuilder:
        self.ops.extend(ops)
        return self

    def build(self) -> Circuit:
        return Circuit(self.num_qubits, tuple(self.ops), self.num_clbits, self.name)


def _op_levels(circuit: Circuit, include_measure: bool = True) -> list[int]:
    """ASAP layer index per op (-1 for ops excluded from depth)."""
    frontier = [0] * circuit.num_qubits
    levels = []
    for op in circuit.ops:
        if op.kind is GateKind.MEASURE and not include_measure:
            levels.append(-1)
            continue
        lvl = max(frontier[q] for q in op.qubits)
        for q in op.qubits:
            frontier[q] = lvl + 1
        levels.append(lvl)
    return levels


def depth(circuit: Circuit, include_measure: bool = True) -> int:
    """Longest chain in the dependency DAG (ops sharing a qubit are ordered).

    Measurements occupy their qubit and count by default; barriers take a
    layer slot on every qubit they span.
    """
    levels = _op_levels(circuit, include_measure)
    return max(levels, default=-1) + 1


def layers(circuit: Circuit, include_measure: bool = True) -> list[list[Op]]:
    levels = _op_levels(circuit, include_measure)
    out: list[list[Op]] = [[] for _ in range(max(levels, default=-1) + 1)]
    for op, lvl in zip(circuit.ops, levels):
        if lvl >= 0:
            out[lvl].append(op)
    return out


def gate_counts(circuit: Circuit) -> Counter:
    return Counter(op.kind for op in circuit.ops)


def num_gates(circuit: Circuit) -> int:
    """Unitary gate count (measurements and barriers excluded)."""
    return sum(1 for op in circuit.ops if op.kind.is_unitary)
