"""Benchmarking how qubit connectivity of 32-qubit architectures affects transpiled circuits."""
from ._accel import BACKEND
from .arch import Architecture, builtin, connectivity
from .circuit import Circuit, CircuitBuilder, GateKind, Op, depth, gate_counts, num_gates
from .scoring import ErrorModel, score_full, score_simplified

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "Architecture", "Circuit", "CircuitBuilder", "ErrorModel", "GateKind", "Op",
    "builtin", "connectivity", "depth", "gate_counts", "num_gates", "score_full", "score_simplified",
]
