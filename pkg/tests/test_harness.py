import pytest

from qarchbench import benchgen
from qarchbench.arch import builtin, from_undirected
from qarchbench.circuit import CircuitBuilder, depth, num_gates
from qarchbench.harness import (
    STATUS_CAPACITY, STATUS_OK, Baseline, BenchmarkRecord, Protocol, baseline_metrics, normalize,
    run_pair, run_suite, selected, selection_key,
)
from qarchbench.scoring import ErrorModel

ONE = Protocol(routers=("sabre",), opt_levels=(1,), trials=1)


def _record(**kw):
    base = dict(benchmark="b", arch="a", c=1.0, router="sabre", opt_level=0, trial=0, seed=0, status="ok",
                n_gate_orig=10, n_gate=10, depth_orig=10, depth=10, score_orig=0.1, score=0.1)
    base.update(kw)
    return BenchmarkRecord(**base)


def test_protocol_defaults():
    p = Protocol()
    assert p.routers == ("basic", "sabre")
    assert p.opt_levels == (0, 1, 2, 3)
    assert p.trials == 10
    assert p.outputs_per_pair == 80


def test_protocol_seeds_follow_enumeration_index():
    p = Protocol(trials=3, seed_base=100)
    configs = list(p.configs())
    assert [cfg.seed for _, cfg, _ in configs] == list(range(100, 124))
    assert [(cfg.router, cfg.opt_level, t) for _, cfg, t in configs[:4]] == [
        ("basic", 0, 0), ("basic", 0, 1), ("basic", 0, 2), ("basic", 1, 0)]


@pytest.mark.parametrize("kwargs", [dict(trials=0), dict(routers=()), dict(opt_levels=())])
def test_protocol_validation(kwargs):
    with pytest.raises(ValueError):
        Protocol(**kwargs)


def test_normalize_identity_and_division():
    b = Baseline(n_gate=10, depth=10, score=0.1)
    r = normalize(_record(), b)
    assert (r.norm_gates, r.norm_depth, r.norm_score) == (1.0, 1.0, 1.0)
    r = normalize(_record(depth=45), b)
    assert r.norm_depth == pytest.approx(4.5)
    assert r.t_trans_s is None


def test_normalize_zero_baseline():
    with pytest.raises(ZeroDivisionError):
        normalize(_record(), Baseline(0, 1, 1.0))


def test_selection_key_tie_breaks():
    recs = [_record(score=0.1, n_gate=12, seed=0), _record(score=0.1, n_gate=11, seed=5),
            _record(score=0.1, n_gate=11, seed=3), _record(score=0.2, n_gate=1, seed=1)]
    assert min(recs, key=selection_key).seed == 3


def test_baseline_is_native_unconstrained():
    c = CircuitBuilder(2).h(0).cx(0, 1).build()
    b = baseline_metrics(c, ErrorModel())
    # H -> RZ SX RZ, then CX
    assert (b.n_gate, b.depth) == (4, 4)


def test_default_protocol_80_records_one_selected():
    recs = run_pair(benchgen.spec_for("ising_6"), builtin("r4"), Protocol())
    assert len(recs) == 80
    sel = selected(recs)
    assert len(sel) == 1
    assert all(sel[0].score <= r.score for r in recs)
    assert [r.seed for r in recs] == list(range(80))
    assert {r.status for r in recs} == {STATUS_OK}


def test_single_output_protocol():
    recs = run_pair(benchgen.spec_for("qft_12"), builtin("s3"), ONE)
    assert len(recs) == 1 and recs[0].selected


def test_benchmark_larger_than_arch():
    with pytest.raises(ValueError):
        run_pair(benchgen.spec_for("qft_12"), from_undirected("p3", 3, [(0, 1), (1, 2)]), ONE)


def test_capacity_status_only_when_simulating(monkeypatch):
    monkeypatch.setenv("QARCHBENCH_MAX_QUBITS", "10")
    spec = benchgen.spec_for("qft_12")
    assert run_pair(spec, builtin("r1"), ONE)[0].status == STATUS_OK
    p = Protocol(routers=("sabre",), opt_levels=(1,), trials=2, simulate=True)
    recs = run_pair(spec, builtin("r1"), p)
    assert {r.status for r in recs} == {STATUS_CAPACITY}
    assert all(r.t_sim_s is None and r.norm_t_sim is None for r in recs)
    assert sum(r.selected for r in recs) == 1


def test_simulate_fills_selected_sim_time():
    p = Protocol(routers=("sabre",), opt_levels=(1, 3), trials=1, simulate=True, verify=True)
    recs = run_pair(benchgen.spec_for("ising_6"), builtin("s3"), p)
    sel = selected(recs)[0]
    assert sel.status == STATUS_OK
    assert sel.t_sim_s > 0 and sel.norm_t_sim > 0
    assert all(r.t_sim_s is None for r in recs if not r.selected)


def test_timing_off_leaves_blanks():
    p = Protocol(routers=("sabre",), opt_levels=(1,), trials=1, simulate=True, timing=False)
    r = run_pair(benchgen.spec_for("ising_6"), builtin("r3"), p)[0]
    assert r.t_trans_s is None and r.t_sim_s is None and r.norm_t_sim is None


def test_run_suite_order_and_jobs_independent():
    specs = [benchgen.spec_for("ising_6"), benchgen.spec_for("qft_12")]
    archs = [builtin("r4"), builtin("s2")]
    p = Protocol(trials=1, opt_levels=(0, 3), timing=False)
    serial = run_suite(specs, archs, p, jobs=1)
    pooled = run_suite(specs, archs, p, jobs=2)
    assert serial == pooled
    assert [(r.benchmark, r.arch) for r in serial[::4]] == [
        ("ising_6", "r4"), ("ising_6", "s2"), ("qft_12", "r4"), ("qft_12", "s2")]
    assert len(selected(serial)) == 4


def test_qft12_r1_regression():
    # frozen output of the default protocol, seed base 0
    recs = run_pair(benchgen.spec_for("qft_12"), builtin("r1"), Protocol())
    sel = selected(recs)[0]
    assert sel.norm_score == pytest.approx(2.20158957, rel=1e-8)
    native = benchgen.qft(12)
    assert sel.n_gate_orig > num_gates(native) and sel.depth_orig >= depth(native)
