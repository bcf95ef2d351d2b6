"""
Error model and circuit scores.

score_simplified = depth * avg_error, score_full = beta * (1 - (1 - avg_error)^depth),
where avg_error is the gate-count-weighted mean of the 1q and 2q error rates.
Lower scores are better.
"""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, fields
from pathlib import Path

from .circuit import Circuit, GateKind, depth

E1Q_DEFAULT = 3.8e-4
E2Q_DEFAULT = 6.4e-3


@dataclass(frozen=True)
class ErrorModel:
    e1q: float = E1Q_DEFAULT
    e2q: float = E2Q_DEFAULT
    beta: float = 1.0
    include_measure: bool = False

    def __post_init__(self):
        for name in ("e1q", "e2q"):
            v = getattr(self, name)
            if not 0 <= v < 1:
                raise ValueError(f"{name} must lie in [0, 1), got {v}")
        if not self.beta > 0:
            raise ValueError(f"beta must be positive, got {self.beta}")

    def scaled(self, factor: float) -> ErrorModel:
        return ErrorModel(self.e1q * factor, self.e2q * factor, self.beta, self.include_measure)


def load_model(path) -> ErrorModel:
    """JSON object with any of e1q, e2q, beta, include_measure."""
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    known = {f.name for f in fields(ErrorModel)}
    unknown = set(doc) - known
    if unknown:
        raise ValueError(f"unknown error-model field(s): {', '.join(sorted(unknown))}")
    return ErrorModel(**doc)


def save_model(model: ErrorModel, path) -> None:
    Path(path).write_text(json.dumps(asdict(model), indent=1) + "\n", encoding="utf-8")


def counted_gates(circuit: Circuit, model: ErrorModel) -> tuple[int, int]:
    """(N_1q, N_2q); barriers never count, measurements only if the model says so."""
    n1 = n2 = 0
    for op in circuit.ops:
        k = op.kind
        if k is GateKind.BARRIER or (k is GateKind.MEASURE and not model.include_measure):
            continue
        if len(op.qubits) == 2:
            n2 += 1
        else:
            n1 += 1
    return n1, n2


def avg_error(circuit: Circuit, model: ErrorModel = ErrorModel()) -> float:
    """Gate-weighted mean error rate; 0.0 for a circuit with no counted gates."""
    n1, n2 = counted_gates(circuit, model)
    if n1 + n2 == 0:
        return 0.0
    return (model.e1q * n1 + model.e2q * n2) / (n1 + n2)


def score_simplified(circuit: Circuit, model: ErrorModel = ErrorModel()) -> float:
    return depth(circuit) * avg_error(circuit, model)


def score_full(circuit: Circuit, model: ErrorModel = ErrorModel()) -> float:
    return model.beta * (1.0 - (1.0 - avg_error(circuit, model)) ** depth(circuit))


def normalized_score(transpiled: Circuit, original: Circuit, model: ErrorModel = ErrorModel()) -> float:
    base = score_simplified(original, model)
    if base == 0:
        raise ZeroDivisionError("original circuit has zero score")
    return score_simplified(transpiled, model) / base
