import math
import os
import sys

import hypothesis.strategies as st
import pytest
from hypothesis import HealthCheck, settings

from qarchbench.circuit import Circuit, GateKind, Op

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

angles = st.floats(min_value=-2 * math.pi, max_value=2 * math.pi, allow_nan=False, allow_infinity=False)

ONE_Q = (GateKind.H, GateKind.X, GateKind.SX, GateKind.RZ, GateKind.RX, GateKind.U)
TWO_Q = (GateKind.CX, GateKind.CP, GateKind.SWAP)
NATIVE_1Q = (GateKind.X, GateKind.SX, GateKind.RZ)


@st.composite
def ops_strategy(draw, n, kinds1=ONE_Q, kinds2=TWO_Q, max_ops=30):
    count = draw(st.integers(0, max_ops))
    ops = []
    for _ in range(count):
        if n >= 2 and draw(st.booleans()):
            kind = draw(st.sampled_from(kinds2))
            a = draw(st.integers(0, n - 1))
            b = draw(st.integers(0, n - 2))
            b = b + 1 if b >= a else b
            ops.append(Op(kind, (a, b), tuple(draw(angles) for _ in range(kind.num_params))))
        else:
            kind = draw(st.sampled_from(kinds1))
            q = draw(st.integers(0, n - 1))
            ops.append(Op(kind, (q,), tuple(draw(angles) for _ in range(kind.num_params))))
    return ops


@st.composite
def circuits(draw, min_qubits=1, max_qubits=5, kinds1=ONE_Q, kinds2=TWO_Q, max_ops=30):
    n = draw(st.integers(min_qubits, max_qubits))
    return Circuit(n, tuple(draw(ops_strategy(n, kinds1, kinds2, max_ops))))


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def tmp_cwd(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    return tmp_path
