"""
Dense statevector simulator.

Amplitude layout: qubit 0 is the least-significant bit of the basis index.
Basis labels are written most-significant first, so "001" has qubit 0 set.
MEASURE and BARRIER leave the state untouched (measurements are recorded,
the returned state is pre-collapse).
"""
from __future__ import annotations

import cmath
import math
import os
import threading
import time
from dataclasses import dataclass

import numpy as np

from ._accel import kernels
from .circuit import Circuit, GateKind
from .gates import matrix_1q

DEFAULT_MAX_QUBITS = 24
MAX_QUBITS_ENV = "QARCHBENCH_MAX_QUBITS"
MEMORY_BUDGET_ENV = "QARCHBENCH_SIM_MEMORY"


class CapacityError(RuntimeError):
    def __init__(self, num_qubits: int, limit: int):
        self.num_qubits = num_qubits
        self.limit = limit
        self.required_bytes = 16 * 2 ** num_qubits
        super().__init__(f"{num_qubits}-qubit statevector needs {_human(self.required_bytes)} "
                         f"(16 * 2^{num_qubits} bytes); limit is {limit} qubits")


def _human(nbytes: int) -> str:
    for unit in ("B", "KiB", "MiB", "GiB", "TiB", "PiB"):
        if nbytes < 1024 or unit == "PiB":
            return f"{nbytes:.0f} {unit}" if unit == "B" else f"{nbytes:.1f} {unit}"
        nbytes /= 1024


def max_qubits() -> int:
    return int(os.environ.get(MAX_QUBITS_ENV, DEFAULT_MAX_QUBITS))


class MemoryBudget:
    """Admission control so concurrent simulations stay under a byte budget."""

    def __init__(self, total_bytes: int):
        self.total = total_bytes
        self.used = 0
        self._cond = threading.Condition()

    def acquire(self, nbytes: int) -> None:
        if nbytes > self.total:
            raise MemoryError(f"request of {_human(nbytes)} exceeds simulation budget {_human(self.total)}")
        with self._cond:
            while self.used + nbytes > self.total:
                self._cond.wait()
            self.used += nbytes

    def release(self, nbytes: int) -> None:
        with self._cond:
            self.used -= nbytes
            self._cond.notify_all()


BUDGET = MemoryBudget(int(os.environ.get(MEMORY_BUDGET_ENV, 16 * 2 ** 30)))


@dataclass
class StateVector:
    num_qubits: int
    amplitudes: np.ndarray

    @classmethod
    def basis(cls, num_qubits: int, label: str | int = 0) -> StateVector:
        index = int(label, 2) if isinstance(label, str) else int(label)
        if isinstance(label, str) and len(label) != num_qubits:
            raise ValueError(f"basis label {label!r} does not have {num_qubits} bits")
        amps = np.zeros(2 ** num_qubits, dtype=np.complex128)
        amps[index] = 1.0
        return cls(num_qubits, amps)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def copy(self) -> StateVector:
        return StateVector(self.num_qubits, self.amplitudes.copy())


@dataclass
class SimResult:
    state: StateVector
    t_sim: float
    measured: tuple[tuple[int, int], ...] = ()


def apply_op(amps: np.ndarray, op) -> None:
    k = op.kind
    q = op.qubits
    if k is GateKind.CX:
        kernels.apply_cx(amps, q[0], q[1])
    elif k is GateKind.CP:
        kernels.apply_cphase(amps, q[0], q[1], cmath.exp(1j * op.params[0]))
    elif k is GateKind.SWAP:
        kernels.apply_swap(amps, q[0], q[1])
    elif k is GateKind.RZ:
        t = op.params[0]
        kernels.apply_diag(amps, q[0], cmath.exp(-0.5j * t), cmath.exp(0.5j * t))
    elif k.is_unitary:
        m = matrix_1q(op)
        kernels.apply_1q(amps, q[0], m[0, 0], m[0, 1], m[1, 0], m[1, 1])


def simulate(circuit: Circuit, initial: str | int | StateVector = 0,
             limit: int | None = None) -> SimResult:
    n = circuit.num_qubits
    limit = max_qubits() if limit is None else limit
    if n > limit:
        raise CapacityError(n, limit)
    nbytes = 16 * 2 ** n
    BUDGET.acquire(nbytes)
    try:
        if isinstance(initial, StateVector):
            if initial.num_qubits != n:
                raise ValueError("initial state size does not match circuit")
            amps = np.array(initial.amplitudes, dtype=np.complex128, copy=True)
        else:
            amps = StateVector.basis(n, initial).amplitudes
        measured = []
        start = time.perf_counter()
        for op in circuit.ops:
            if op.kind is GateKind.MEASURE:
                measured.append((op.qubits[0], op.clbit))
            else:
                apply_op(amps, op)
        t_sim = time.perf_counter() - start
    finally:
        BUDGET.release(nbytes)
    return SimResult(StateVector(n, amps), t_sim, tuple(measured))


def probabilities(state: StateVector, qubits=None, cutoff: float = 0.0) -> dict[str, float]:
    """Marginal Born probabilities; key's rightmost character is qubits[0]."""
    n = state.num_qubits
    qubits = list(range(n)) if qubits is None else list(qubits)
    p = np.abs(state.amplitudes) ** 2
    # axis a of the tensor holds qubit n-1-a
    lead = [n - 1 - q for q in reversed(qubits)]
    rest = [a for a in range(n) if a not in lead]
    flat = np.transpose(p.reshape([2] * n), lead + rest).reshape(2 ** len(qubits), -1).sum(axis=1)
    width = len(qubits)
    return {format(i, f"0{width}b") if width else "": float(v)
            for i, v in enumerate(flat) if v > cutoff}


def top_k(state: StateVector, k: int = 8, qubits=None) -> list[tuple[str, float]]:
    probs = probabilities(state, qubits, cutoff=1e-15)
    return sorted(probs.items(), key=lambda kv: (-kv[1], kv[0]))[:k]


def _compact(circuit: Circuit, keep) -> tuple[Circuit, dict[int, int]]:
    """Restrict to the given physical qubits, relabelled 0..len(keep)-1."""
    mapping = {p: i for i, p in enumerate(keep)}
    ops = tuple(op.remap(mapping) for op in circuit.ops)
    return Circuit(len(keep), ops, circuit.num_clbits), mapping


def _random_product_ops(n: int, seed: int):
    from .circuit import Op
    rng = np.random.default_rng(seed)
    angles = rng.uniform(-math.pi, math.pi, size=(n, 3))
    return [Op(GateKind.U, (q,), tuple(float(a) for a in angles[q])) for q in range(n)]


def equivalence(original: Circuit, transpiled: Circuit, final_layout, initial_layout=None,
                input_seed: int | None = None, limit: int | None = None) -> float:
    """|<psi_orig | P^dagger psi_trans>| from |0...0> (or a seeded random product state).

    Layouts map logical qubit -> physical qubit. Physical qubits not holding
    a logical qubit at the end must be back in |0>, otherwise fidelity drops.
    """
    n = original.num_qubits
    final = [int(final_layout[i]) for i in range(n)]
    initial = list(range(n)) if initial_layout is None else [int(initial_layout[i]) for i in range(n)]
    if len(set(final)) != n or len(set(initial)) != n:
        raise ValueError("layout is not injective on the circuit's qubits")
    active = sorted(set(transpiled.active_qubits()) | set(final) | set(initial))
    if max(active) >= transpiled.num_qubits:
        raise ValueError("layout refers to qubits outside the transpiled circuit")
    compact, mapping = _compact(transpiled, active)
    prep_orig = _random_product_ops(n, input_seed) if input_seed is not None else []
    prep_trans = [op.remap({i: mapping[initial[i]]}) for i, op in enumerate(prep_orig)]

    orig = Circuit(n, tuple(prep_orig) + original.ops, original.num_clbits)
    trans = Circuit(compact.num_qubits, tuple(prep_trans) + compact.ops, compact.num_clbits)
    psi = simulate(orig, limit=limit).state.amplitudes
    phi = simulate(trans, limit=limit).state.amplitudes

    m = trans.num_qubits
    t = phi.reshape([2] * m)
    # axis a holds compact qubit m-1-a
    logical_axes = [m - 1 - mapping[final[i]] for i in reversed(range(n))]
    others = [a for a in range(m) if a not in logical_axes]
    t = np.transpose(t, logical_axes + others)
    t = t.reshape(2 ** n, -1)[:, 0]
    return float(abs(np.vdot(psi, t)))
