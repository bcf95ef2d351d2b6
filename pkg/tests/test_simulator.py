import math

import numpy as np
import pytest
from hypothesis import given, settings

from conftest import circuits
from oracles import full_unitary
from qarchbench import simulator as S
from qarchbench.circuit import Circuit, CircuitBuilder, GateKind, Op


def test_h_on_zero():
    amps = S.simulate(CircuitBuilder(1).h(0).build()).state.amplitudes
    assert np.allclose(amps, [1 / math.sqrt(2)] * 2)


def test_bell():
    state = S.simulate(CircuitBuilder(2).h(0).cx(0, 1).build()).state
    assert np.allclose(state.amplitudes, [1 / math.sqrt(2), 0, 0, 1 / math.sqrt(2)])
    assert S.probabilities(state) == {"00": pytest.approx(0.5), "11": pytest.approx(0.5)}


def test_qubit0_is_low_bit():
    state = S.simulate(CircuitBuilder(3).x(0).build()).state
    assert S.top_k(state, 1) == [("001", 1.0)]
    assert state.amplitudes[1] == 1


def test_marginal_of_zero_state():
    assert S.probabilities(S.StateVector.basis(1), [0]) == {"0": 1.0}


def test_marginal_key_order():
    state = S.StateVector.basis(3, "110")  # qubits 1 and 2 set
    assert S.probabilities(state, [0, 2]) == {"10": 1.0}
    assert S.probabilities(state, [2, 0]) == {"01": 1.0}


def test_measure_is_recorded_not_applied():
    c = CircuitBuilder(1, 1).h(0).measure(0, 0).build()
    res = S.simulate(c)
    assert res.measured == ((0, 0),)
    assert np.allclose(np.abs(res.state.amplitudes) ** 2, [0.5, 0.5])


def test_capacity_error_names_memory():
    with pytest.raises(S.CapacityError, match=r"16 \* 2\^30 bytes") as info:
        S.simulate(Circuit(30), limit=24)
    assert info.value.required_bytes == 16 * 2 ** 30
    assert "16.0 GiB" in str(info.value)


def test_env_cap(monkeypatch):
    monkeypatch.setenv(S.MAX_QUBITS_ENV, "3")
    with pytest.raises(S.CapacityError):
        S.simulate(Circuit(4))


@settings(max_examples=60)
@given(circuits(min_qubits=1, max_qubits=6, max_ops=25))
def test_matches_unitary_oracle(c):
    amps = S.simulate(c).state.amplitudes
    expected = full_unitary(c)[:, 0]
    assert np.max(np.abs(amps - expected)) <= 1e-10


@given(circuits(min_qubits=1, max_qubits=5, max_ops=25))
def test_norm_preserved_after_every_gate(c):
    amps = S.StateVector.basis(c.num_qubits).amplitudes
    for op in c.ops:
        S.apply_op(amps, op)
        assert abs(np.linalg.norm(amps) - 1) < 1e-10


@given(circuits(min_qubits=1, max_qubits=5, max_ops=20))
def test_gate_then_inverse_is_identity(c):
    rng = np.random.default_rng(len(c.ops))
    v = rng.normal(size=2 ** c.num_qubits) + 1j * rng.normal(size=2 ** c.num_qubits)
    v /= np.linalg.norm(v)
    start = S.StateVector(c.num_qubits, v)
    out = S.simulate(c.compose(c.inverse()), start).state
    assert abs(abs(np.vdot(v, out.amplitudes)) - 1) < 1e-10


def test_equivalence_identity():
    c = CircuitBuilder(3).h(0).cx(0, 1).rz(0.3, 2).cx(1, 2).build()
    assert S.equivalence(c, c, [0, 1, 2]) == pytest.approx(1.0, abs=1e-12)
    assert S.equivalence(c, c, [0, 1, 2], input_seed=4) == pytest.approx(1.0, abs=1e-12)


def test_equivalence_with_appended_swap():
    c = CircuitBuilder(2).h(0).rz(0.7, 0).build()
    swapped = c.compose(CircuitBuilder(2).swap(0, 1).build())
    assert S.equivalence(c, swapped, [1, 0], input_seed=1) == pytest.approx(1.0, abs=1e-12)
    assert S.equivalence(c, swapped, [0, 1], input_seed=1) < 0.99


def test_equivalence_detects_difference():
    a = CircuitBuilder(2).h(0).cx(0, 1).build()
    b = CircuitBuilder(2).h(0).build()
    assert S.equivalence(a, b, [0, 1]) < 0.8


def test_equivalence_with_extra_physical_qubits():
    orig = CircuitBuilder(2).h(0).cx(0, 1).build()
    # logical 0 on physical 3, logical 1 on physical 5, nothing else touched
    trans = Circuit(8, (Op(GateKind.H, (3,)), Op(GateKind.CX, (3, 5))))
    assert S.equivalence(orig, trans, [3, 5], [3, 5], input_seed=2) == pytest.approx(1.0, abs=1e-12)


def test_memory_budget_rejects_oversized_request():
    budget = S.MemoryBudget(100)
    with pytest.raises(MemoryError):
        budget.acquire(200)
    budget.acquire(60)
    budget.release(60)
    assert budget.used == 0
