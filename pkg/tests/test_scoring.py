import math

import hypothesis.strategies as st
import pytest
from hypothesis import given

from conftest import circuits
from qarchbench.circuit import Circuit, CircuitBuilder, GateKind, Op, depth
from qarchbench.scoring import (
    ErrorModel, avg_error, counted_gates, load_model, normalized_score, save_model,
    score_full, score_simplified,
)

NATIVE_2Q = (GateKind.CX,)


def test_default_rates():
    m = ErrorModel()
    assert (m.e1q, m.e2q, m.beta) == (3.8e-4, 6.4e-3, 1.0)


def test_avg_error_single_gates():
    assert avg_error(CircuitBuilder(2).cx(0, 1).build()) == pytest.approx(6.4e-3)
    assert avg_error(CircuitBuilder(1).h(0).build()) == pytest.approx(3.8e-4)


def test_avg_error_mixed():
    c = CircuitBuilder(4).cx(0, 1).cx(2, 3).h(0).h(2).build()
    assert avg_error(c) == pytest.approx(3.39e-3)


def test_empty_circuit_scores_zero():
    c = Circuit(3, ())
    assert avg_error(c) == 0.0
    assert score_simplified(c) == 0.0
    assert score_full(c) == 0.0


def test_single_cx_simplified_score():
    assert score_simplified(CircuitBuilder(2).cx(0, 1).build()) == pytest.approx(6.4e-3)


def test_depth_two_mixed_score():
    c = CircuitBuilder(4).cx(0, 1).cx(2, 3).h(0).h(2).build()
    assert depth(c) == 2
    assert score_simplified(c) == pytest.approx(6.78e-3)


def test_full_score_depth_one_equals_avg_error():
    c = CircuitBuilder(2).cx(0, 1).build()
    assert score_full(c) == pytest.approx(avg_error(c), rel=1e-12)


def test_full_score_deep_cx_chain():
    b = CircuitBuilder(2)
    for _ in range(100):
        b.cx(0, 1)
    c = b.build()
    assert depth(c) == 100
    assert score_full(c) == pytest.approx(1 - (1 - 6.4e-3) ** 100)
    assert score_full(c) == pytest.approx(0.4738, abs=5e-5)


def test_barriers_never_counted_measure_optional():
    c = CircuitBuilder(2, 1).cx(0, 1).barrier().measure(0, 0).build()
    assert counted_gates(c, ErrorModel()) == (0, 1)
    assert counted_gates(c, ErrorModel(include_measure=True)) == (1, 1)


def test_beta_scales_full_score():
    c = CircuitBuilder(2).cx(0, 1).h(0).build()
    assert score_full(c, ErrorModel(beta=2.5)) == pytest.approx(2.5 * score_full(c))


@pytest.mark.parametrize("kwargs", [dict(e1q=-1e-3), dict(e2q=1.0), dict(beta=0.0)])
def test_model_validation(kwargs):
    with pytest.raises(ValueError):
        ErrorModel(**kwargs)


def test_model_file_round_trip(tmp_path):
    m = ErrorModel(1e-4, 2e-3, 0.7, True)
    save_model(m, tmp_path / "m.json")
    assert load_model(tmp_path / "m.json") == m


def test_model_file_rejects_unknown_field(tmp_path):
    (tmp_path / "m.json").write_text('{"e1q": 1e-4, "e3q": 0.1}')
    with pytest.raises(ValueError, match="e3q"):
        load_model(tmp_path / "m.json")


def test_normalized_score():
    orig = CircuitBuilder(2).cx(0, 1).build()
    longer = CircuitBuilder(2).cx(0, 1).cx(1, 0).cx(0, 1).build()
    assert normalized_score(longer, orig) == pytest.approx(3.0)
    with pytest.raises(ZeroDivisionError):
        normalized_score(longer, Circuit(2, ()))


@given(circuits(min_qubits=2, max_qubits=5, kinds1=(GateKind.X, GateKind.SX, GateKind.RZ), kinds2=NATIVE_2Q,
                max_ops=40))
def test_full_and_simplified_agree_when_small(c):
    x = avg_error(c) * depth(c)
    if x <= 0.01 and x > 0:
        assert score_full(c) == pytest.approx(score_simplified(c), rel=0.01)


@given(st.integers(1, 400), st.floats(1e-6, 0.05))
def test_full_score_monotone_in_depth(d, e):
    # 1 - (1 - e)^d grows with d and stays below beta
    m = ErrorModel(e, e)
    b1 = CircuitBuilder(1)
    for _ in range(d):
        b1.x(0)
    c1 = b1.build()
    c2 = CircuitBuilder(1).extend(c1.ops).x(0).build()
    assert score_full(c1, m) < score_full(c2, m) < 1.0


@given(st.lists(circuits(min_qubits=2, max_qubits=4, kinds1=(GateKind.X, GateKind.RZ), kinds2=NATIVE_2Q,
                         max_ops=20), min_size=2, max_size=6),
       st.floats(0.1, 10))
def test_argmin_invariant_under_rate_scaling(cs, factor):
    # scaling both rates by the same factor scales every simplified score alike
    base = [score_simplified(c) for c in cs]
    scaled = [score_simplified(c, ErrorModel().scaled(factor)) for c in cs]
    for b, s in zip(base, scaled):
        assert s == pytest.approx(b * factor, rel=1e-12, abs=1e-300)
    best = min(range(len(cs)), key=lambda i: base[i])
    assert math.isclose(scaled[best], min(scaled), rel_tol=1e-12, abs_tol=1e-300)
