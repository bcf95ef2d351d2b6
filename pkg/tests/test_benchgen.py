import math

import pytest

from qarchbench import benchgen as B
from qarchbench.circuit import CircuitBuilder, GateKind, gate_counts
from qarchbench.simulator import probabilities, simulate, top_k


def test_qft1_is_single_h():
    assert [op.kind for op in B.qft(1).ops] == [GateKind.H]


def test_qft3_counts():
    counts = gate_counts(B.qft(3))
    assert counts == {GateKind.H: 3, GateKind.CP: 3, GateKind.SWAP: 1}


@pytest.mark.parametrize("n", [2, 5, 12])
def test_qft_counts_formula(n):
    counts = gate_counts(B.qft(n))
    assert counts[GateKind.H] == n
    assert counts[GateKind.CP] == n * (n - 1) // 2
    assert counts[GateKind.SWAP] == n // 2


def test_qft3_uniform_from_zero():
    amps = simulate(B.qft(3)).state.amplitudes
    assert abs(amps - 1 / math.sqrt(8)).max() < 1e-12


def test_qpe_exact_phase():
    c = B.qpe(4, 1 / 8)
    probs = probabilities(simulate(c).state, [0, 1, 2])
    assert probs["001"] == pytest.approx(1.0, abs=1e-12)


def test_qpe_zero_phase():
    probs = probabilities(simulate(B.qpe(2, 0.0)).state, [0])
    assert probs["0"] == pytest.approx(1.0, abs=1e-12)


def test_qpe_default_size_and_measurements():
    c = B.qpe(15)
    assert c.num_qubits == 15 and c.num_clbits == 14
    assert gate_counts(c)[GateKind.MEASURE] == 14


def test_qpe_rejects_bad_theta():
    with pytest.raises(ValueError):
        B.qpe(4, 1.0)


def test_ising_counts():
    c = B.ising(2, steps=1)
    assert gate_counts(c) == {GateKind.CX: 2, GateKind.RZ: 1, GateKind.RX: 2}
    assert B.ising(6).num_qubits == 6


def test_ising_without_field_keeps_zero_state():
    state = simulate(B.ising(5, h=0.0)).state
    assert top_k(state, 1)[0] == ("00000", pytest.approx(1.0, abs=1e-12))


def test_surface_sizes_and_cx_counts():
    assert B.surface(5, 5).num_qubits == 25
    assert B.surface(5, 3).num_qubits == 15
    assert gate_counts(B.surface(5, 5, 1))[GateKind.CX] == 40
    assert gate_counts(B.surface(5, 3, 1))[GateKind.CX] == 22


def test_surface_checks_are_deterministic_on_zero_state():
    # Z-type checks on |0...0> read 0; X-type checks are random but the state stays normalized
    c = B.surface(3, 3)
    state = simulate(c).state
    z_ancillas = [i * 3 + j for i in range(3) for j in range(3) if (i + j) % 2 and i % 2]
    assert probabilities(state, z_ancillas) == {"0" * len(z_ancillas): pytest.approx(1.0)}


def test_stabilizer_round_zz():
    b = CircuitBuilder(3, 1)
    B.stabilizer_round(b, [0, 1], ["ZZ"], 2, 0)
    counts = gate_counts(b.build())
    assert counts == {GateKind.CX: 2, GateKind.MEASURE: 1}


def test_steane_sizes():
    assert B.steane(3).num_qubits == 25
    assert B.steane(1).num_qubits == 13


def test_steane_logical_zero_has_trivial_syndrome():
    c = B.steane(1)
    probs = probabilities(simulate(c).state, list(range(7, 13)))
    assert probs == {"000000": pytest.approx(1.0, abs=1e-10)}


def test_repetition_code_is_small():
    c = B.repetition_code(3, 2)
    assert c.num_qubits == 7
    probs = probabilities(simulate(c).state, list(range(3, 7)))
    assert probs == {"0000": pytest.approx(1.0)}


def test_default_suite_names():
    names = [s.name for s in B.default_suite()]
    assert names == list(B.DEFAULT_SUITE)
    for spec in B.default_suite():
        assert spec.build().num_qubits == spec.num_qubits


@pytest.mark.parametrize("name", B.DEFAULT_SUITE)
def test_bundled_files_match_generators(name):
    assert B.bundled(name) == B.spec_for(name).build()


def test_unknown_benchmark():
    with pytest.raises(ValueError, match="unknown benchmark"):
        B.spec_for("grover_5")
    with pytest.raises(ValueError):
        B.generate("surface", 16)


def test_file_spec(tmp_path):
    from qarchbench.qasm import serialize
    p = tmp_path / "mine.qasm"
    p.write_text(serialize(B.qft(4)))
    spec = B.file_spec(p)
    assert spec.name == "mine" and spec.num_qubits == 4
    assert spec.build().ops == B.qft(4).ops
