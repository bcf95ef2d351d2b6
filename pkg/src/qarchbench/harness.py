"""
Experiment driver: every (benchmark, architecture) pair is transpiled under
each router x optimization level x trial, the lowest-score output is
selected, and metrics are normalized against the unconstrained native circuit.
"""
from __future__ import annotations

import os
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

from .arch import Architecture, connectivity
from .benchgen import BenchmarkSpec
from .circuit import Circuit, depth, num_gates
from .scoring import ErrorModel, score_simplified
from .simulator import CapacityError, _compact, equivalence, max_qubits, simulate
from .transpiler import SabreParams, TranspileConfig, decompose_to_native, transpile, uncoupled_gates

STATUS_OK = "ok"
STATUS_CAPACITY = "capacity"
STATUS_INVALID = "invalid-routing"
STATUS_MISMATCH = "not-equivalent"
EQUIVALENCE_TOL = 1e-9


@dataclass(frozen=True)
class Protocol:
    routers: tuple[str, ...] = ("basic", "sabre")
    opt_levels: tuple[int, ...] = (0, 1, 2, 3)
    trials: int = 10
    simulate: bool = False
    seed_base: int = 0
    sabre: SabreParams = field(default_factory=SabreParams)
    timing: bool = True
    verify: bool = False
    sim_repeats: int = 3

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not self.routers or not self.opt_levels:
            raise ValueError("need at least one router and one optimization level")
        if self.sim_repeats < 1:
            raise ValueError("sim_repeats must be >= 1")

    @property
    def outputs_per_pair(self) -> int:
        return len(self.routers) * len(self.opt_levels) * self.trials

    def configs(self):
        """(index, TranspileConfig, trial) in stable enumeration order."""
        index = 0
        for router in self.routers:
            for level in self.opt_levels:
                for trial in range(self.trials):
                    yield index, TranspileConfig(router, level, self.seed_base + index, self.sabre), trial
                    index += 1


@dataclass(frozen=True)
class Baseline:
    n_gate: int
    depth: int
    score: float
    t_sim: float | None = None


@dataclass
class BenchmarkRecord:
    benchmark: str
    arch: str
    c: float
    router: str
    opt_level: int
    trial: int
    seed: int
    status: str
    n_gate_orig: int
    n_gate: int
    depth_orig: int
    depth: int
    score_orig: float
    score: float
    norm_gates: float | None = None
    norm_depth: float | None = None
    norm_score: float | None = None
    t_trans_s: float | None = None
    t_sim_s: float | None = None
    norm_t_sim: float | None = None
    selected: bool = False


def baseline_metrics(circuit: Circuit, model: ErrorModel) -> Baseline:
    native = decompose_to_native(circuit)
    return Baseline(num_gates(native), depth(native), score_simplified(native, model))


def normalize(record: BenchmarkRecord, baseline: Baseline) -> BenchmarkRecord:
    """Fill ratios raw / baseline; t_trans stays absolute."""
    if baseline.n_gate == 0 or baseline.depth == 0 or baseline.score == 0:
        raise ZeroDivisionError(f"{record.benchmark}: baseline has a zero metric")
    norm_t_sim = None
    if record.t_sim_s is not None and baseline.t_sim:
        norm_t_sim = record.t_sim_s / baseline.t_sim
    return replace(record, norm_gates=record.n_gate / baseline.n_gate,
                   norm_depth=record.depth / baseline.depth,
                   norm_score=record.score / baseline.score, norm_t_sim=norm_t_sim)


def selection_key(record: BenchmarkRecord):
    return (record.score, record.n_gate, record.seed)


def _median_sim_time(circuit: Circuit, repeats: int, limit: int) -> float:
    return statistics.median(simulate(circuit, limit=limit).t_sim for _ in range(repeats))


def _active_compact(circuit: Circuit) -> Circuit:
    return _compact(circuit, sorted(circuit.active_qubits()))[0]


def run_pair(spec: BenchmarkSpec, arch: Architecture, protocol: Protocol,
             model: ErrorModel = ErrorModel()) -> list[BenchmarkRecord]:
    circuit = spec.build()
    if circuit.num_qubits > arch.num_qubits:
        raise ValueError(f"{spec.name} needs {circuit.num_qubits} qubits; {arch.name} has {arch.num_qubits}")
    base = baseline_metrics(circuit, model)
    limit = max_qubits()
    # the cap only matters when something has to be simulated
    oversize = (protocol.simulate or protocol.verify) and circuit.num_qubits > limit
    c = connectivity(arch)
    records, outcomes = [], []
    for index, config, trial in protocol.configs():
        out = transpile(circuit, arch, config)
        status = STATUS_INVALID if uncoupled_gates(out.circuit, arch) else STATUS_OK
        if oversize and status == STATUS_OK:
            status = STATUS_CAPACITY
        rec = BenchmarkRecord(
            spec.name, arch.name, c, config.router, config.opt_level, trial, config.seed, status,
            base.n_gate, num_gates(out.circuit), base.depth, depth(out.circuit), base.score,
            score_simplified(out.circuit, model),
            t_trans_s=out.t_trans if protocol.timing else None)
        records.append(rec)
        outcomes.append(out)
    valid = [i for i, r in enumerate(records) if r.status != STATUS_INVALID] or list(range(len(records)))
    best = min(valid, key=lambda i: selection_key(records[i]))
    records[best].selected = True
    chosen = outcomes[best]

    if protocol.verify and not oversize:
        try:
            fid = equivalence(circuit, chosen.circuit, chosen.final_layout.l2p, chosen.initial_layout.l2p,
                              input_seed=protocol.seed_base)
            if fid < 1 - EQUIVALENCE_TOL:
                records[best].status = STATUS_MISMATCH
        except CapacityError:
            records[best].status = STATUS_CAPACITY
    if protocol.simulate and not oversize and records[best].status == STATUS_OK:
        compact = _active_compact(chosen.circuit)
        if compact.num_qubits > limit:
            records[best].status = STATUS_CAPACITY
        else:
            t_orig = _median_sim_time(decompose_to_native(circuit), protocol.sim_repeats, limit)
            t_sel = _median_sim_time(compact, protocol.sim_repeats, limit)
            if protocol.timing:
                base = replace(base, t_sim=t_orig)
                records[best].t_sim_s = t_sel
    return [normalize(r, base) for r in records]


def _run_pair_job(args):
    return args[0], args[1], run_pair(*args[2:])


def run_suite(benchmarks, architectures, protocol: Protocol = Protocol(),
              model: ErrorModel = ErrorModel(), jobs: int | None = None, progress=None) -> list[BenchmarkRecord]:
    """Pairs run on a bounded process pool; output order depends only on the inputs."""
    benchmarks = list(benchmarks)
    architectures = list(architectures)
    tasks = [(bi, ai, spec, arch, protocol, model)
             for bi, spec in enumerate(benchmarks) for ai, arch in enumerate(architectures)]
    jobs = jobs or os.cpu_count() or 1
    results = []
    if jobs == 1 or len(tasks) == 1:
        for t in tasks:
            results.append(_run_pair_job(t))
            if progress:
                progress(t[2].name, t[3].name)
    else:
        with ProcessPoolExecutor(max_workers=min(jobs, len(tasks))) as pool:
            for bi, ai, recs in pool.map(_run_pair_job, tasks):
                results.append((bi, ai, recs))
                if progress:
                    progress(benchmarks[bi].name, architectures[ai].name)
    results.sort(key=lambda r: (r[0], r[1]))
    order = {r: i for i, r in enumerate(("basic", "sabre"))}
    out = []
    for _, _, recs in results:
        out.extend(sorted(recs, key=lambda r: (order.get(r.router, 99), r.router, r.opt_level, r.trial)))
    return out


def selected(records) -> list[BenchmarkRecord]:
    return [r for r in records if r.selected]
