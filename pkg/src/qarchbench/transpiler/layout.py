"""Initial placement of logical qubits on physical qubits."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .._accel import kernels
from ..arch import Architecture
from ..circuit import Circuit


class LayoutError(ValueError):
    pass


@dataclass(frozen=True)
class Layout:
    """Bijection logical -> physical over all architecture qubits.

    Logical indices >= num_logical are placeholders for idle physical qubits.
    """
    l2p: tuple[int, ...]
    num_logical: int

    def __post_init__(self):
        if sorted(self.l2p) != list(range(len(self.l2p))):
            raise LayoutError("layout is not a permutation of the physical qubits")
        if not 0 <= self.num_logical <= len(self.l2p):
            raise LayoutError("more logical qubits than physical qubits")

    def __getitem__(self, logical: int) -> int:
        return self.l2p[logical]

    @property
    def p2l(self) -> tuple[int, ...]:
        inv = [0] * len(self.l2p)
        for lq, p in enumerate(self.l2p):
            inv[p] = lq
        return tuple(inv)

    def logical(self) -> tuple[int, ...]:
        return self.l2p[:self.num_logical]

    @classmethod
    def from_partial(cls, placement, num_physical: int) -> Layout:
        """Extend an injective placement; unused physical qubits follow in ascending order."""
        placement = [int(p) for p in placement]
        if len(set(placement)) != len(placement) or any(not 0 <= p < num_physical for p in placement):
            raise LayoutError(f"invalid placement {placement}")
        used = set(placement)
        rest = [p for p in range(num_physical) if p not in used]
        return cls(tuple(placement + rest), len(placement))


def trivial_layout(circuit: Circuit, arch: Architecture) -> Layout:
    _check_fits(circuit, arch)
    return Layout(tuple(range(arch.num_qubits)), circuit.num_qubits)


def _check_fits(circuit, arch):
    if circuit.num_qubits > arch.num_qubits:
        raise LayoutError(f"circuit has {circuit.num_qubits} qubits but {arch.name} only {arch.num_qubits}")


def kernel_arrays(circuit: Circuit, reverse: bool = False):
    ops = circuit.ops[::-1] if reverse else circuit.ops
    qptr = np.zeros(len(ops) + 1, dtype=np.int32)
    qptr[1:] = np.cumsum([len(op.qubits) for op in ops])
    qarg = np.fromiter((q for op in ops for q in op.qubits), dtype=np.int32, count=int(qptr[-1]))
    needs = np.fromiter((op.is_two_qubit for op in ops), dtype=np.uint8, count=len(ops))
    return qptr, qarg, needs


def sub_seed(seed: int, k: int) -> int:
    return ((seed & 0xFFFFFFFF) << 16) + k


def sabre_layout(circuit: Circuit, arch: Architecture, seed: int = 0, iterations: int = 2,
                 sabre_params: dict | None = None) -> Layout:
    """Random start refined by alternating forward/backward SABRE passes."""
    _check_fits(circuit, arch)
    rng = np.random.default_rng(seed)
    l2p = rng.permutation(arch.num_qubits).astype(np.int32)
    fwd = kernel_arrays(circuit)
    bwd = kernel_arrays(circuit, reverse=True)
    ptr, idx = arch.neighbor_csr
    params = sabre_params or {}
    for it in range(iterations):
        for k, arrays in enumerate((fwd, bwd)):
            _, l2p = kernels.sabre_route(arch.distance, ptr, idx, *arrays, l2p,
                                         seed=sub_seed(seed, 2 * it + k), **params)
    return Layout.from_partial(l2p[:circuit.num_qubits], arch.num_qubits)


def initial_layout(circuit: Circuit, arch: Architecture, strategy: str = "trivial", seed: int = 0,
                   sabre_params: dict | None = None) -> Layout:
    if strategy == "trivial":
        return trivial_layout(circuit, arch)
    if strategy in ("sabre", "sabre-refined"):
        return sabre_layout(circuit, arch, seed, sabre_params=sabre_params)
    raise LayoutError(f"unknown layout strategy {strategy!r}")
