"""Command-line entry point: ``qarchbench <subcommand> ...``."""
from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import arch as archmod
from . import benchgen
from .circuit import depth, num_gates
from .qasm import QasmError, parse_with_diagnostics, serialize
from .scoring import ErrorModel, load_model, score_simplified
from .simulator import MAX_QUBITS_ENV, CapacityError, _compact, max_qubits, simulate, top_k


class CliError(Exception):
    pass


def _fmt(x) -> str:
    return format(x, ".9g") if isinstance(x, float) else str(x)


def _read_circuit(path):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}") from None
    circ, diags = parse_with_diagnostics(text)
    for d in diags:
        if d.severity == "warning":
            print(f"{path}:{d}", file=sys.stderr)
    if circ is None:
        raise CliError("\n".join(f"{path}:{d}" for d in diags if d.severity == "error"))
    return circ


def _arch(spec):
    try:
        return archmod.resolve(spec)
    except (OSError, archmod.ArchitectureError) as exc:
        raise CliError(str(exc)) from None


def _error_model(args) -> ErrorModel:
    model = load_model(args.model) if args.model else ErrorModel()
    overrides = {k: getattr(args, k) for k in ("e1q", "e2q", "beta") if getattr(args, k) is not None}
    if args.include_measure:
        overrides["include_measure"] = True
    if overrides:
        model = ErrorModel(**{**model.__dict__, **overrides})
    return model


def _add_model_args(p):
    g = p.add_argument_group("error model")
    g.add_argument("--e1q", type=float, help="single-qubit gate error rate (default 3.8e-4)")
    g.add_argument("--e2q", type=float, help="two-qubit gate error rate (default 6.4e-3)")
    g.add_argument("--beta", type=float, help="scale coefficient of the full score")
    g.add_argument("--include-measure", action="store_true", help="count measurements as 1q gates")
    g.add_argument("--model", help="JSON error-model file (flags override its fields)")


def _add_sabre_args(p):
    from .transpiler import SabreParams
    d = SabreParams()
    g = p.add_argument_group("sabre")
    g.add_argument("--ext-size", type=int, default=d.ext_size, help="extended-set size")
    g.add_argument("--ext-weight", type=float, default=d.ext_weight, help="extended-set weight")
    g.add_argument("--decay-delta", type=float, default=d.decay_delta, help="decay increment per SWAP")
    g.add_argument("--decay-reset", type=int, default=d.decay_reset, help="SWAPs between decay resets")


def _sabre(args):
    from .transpiler import SabreParams
    return SabreParams(args.ext_size, args.ext_weight, args.decay_delta, args.decay_reset)


# --- subcommands -----------------------------------------------------------

def cmd_list_archs(args):
    print(f"{'name':<6}{'family':<11}{'qubits':>7}{'n_con':>7}{'n_full':>8}{'c':>7}")
    for name in archmod.BUILTIN_NAMES:
        a = archmod.builtin(name)
        print(f"{a.name:<6}{a.family:<11}{a.num_qubits:>7}{a.n_con:>7}{a.n_full:>8}"
              f"{archmod.connectivity(a):>7.2f}")


def cmd_show_arch(args):
    a = _arch(args.name)
    if args.dot:
        sys.stdout.write(archmod.to_dot(a))
        return
    if args.json:
        sys.stdout.write(archmod.dumps(a))
        return
    print(f"name={a.name}")
    print(f"family={a.family}")
    print(f"num_qubits={a.num_qubits}")
    print(f"n_con={a.n_con}")
    print(f"n_full={a.n_full}")
    print(f"c={_fmt(archmod.connectivity(a))}")
    print(f"diameter={int(a.distance.max())}")
    print("edges=" + " ".join(f"{x}-{y}" for x, y in a.undirected_edges))


def cmd_gen_bench(args):
    try:
        circ = benchgen.generate(args.family, args.qubits)
    except ValueError as exc:
        raise CliError(str(exc)) from None
    text = serialize(circ)
    if args.output in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(args.output).write_text(text, encoding="utf-8")
        print(f"wrote {args.output}: {circ.num_qubits} qubits, {len(circ.ops)} ops", file=sys.stderr)


def cmd_transpile(args):
    from .transpiler import TranspileConfig, decompose_to_native, transpile
    circ = _read_circuit(args.input)
    a = _arch(args.arch)
    model = _error_model(args)
    config = TranspileConfig(args.router, args.opt, args.seed, _sabre(args), args.layout)
    if circ.num_qubits > a.num_qubits:
        raise CliError(f"circuit has {circ.num_qubits} qubits but {a.name} only {a.num_qubits}")
    out = transpile(circ, a, config)
    if args.output:
        Path(args.output).write_text(serialize(out.circuit), encoding="utf-8")
    native = decompose_to_native(circ)
    s_orig, s_out = score_simplified(native, model), score_simplified(out.circuit, model)
    pairs = [
        ("arch", a.name), ("router", args.router), ("opt_level", args.opt), ("seed", args.seed),
        ("n_gate_orig", num_gates(native)), ("n_gate", num_gates(out.circuit)),
        ("depth_orig", depth(native)), ("depth", depth(out.circuit)),
        ("score_orig", s_orig), ("score", s_out),
        ("norm_score", s_out / s_orig if s_orig else float("nan")),
        ("swaps", out.num_swaps),
        ("initial_layout", ",".join(map(str, out.initial_layout.logical()))),
        ("final_layout", ",".join(map(str, out.final_layout.logical()))),
        ("t_trans", out.t_trans),
    ]
    for k, v in pairs:
        print(f"{k}={_fmt(v)}")


def cmd_simulate(args):
    circ = _read_circuit(args.input)
    qubits = [int(q) for q in args.qubits.split(",")] if args.qubits else None
    if circ.num_qubits > max_qubits() and args.initial is None:
        # idle wires stay in |0>, so drop them (typical for transpiled files)
        keep = sorted(set(circ.active_qubits()) | set(qubits or ()))
        circ, mapping = _compact(circ, keep)
        qubits = [mapping[q] for q in qubits] if qubits else None
        print("# compacted to physical qubits " + ",".join(map(str, keep)))
    try:
        res = simulate(circ, initial=args.initial or 0)
    except CapacityError as exc:
        raise CliError(str(exc)) from None
    print(f"# qubits={circ.num_qubits} t_sim={_fmt(res.t_sim)}")
    for label, p in top_k(res.state, args.top, qubits):
        print(f"{label} {p:.9g}")


def _split(text):
    return [x for x in text.split(",") if x]


def cmd_run(args):
    from .harness import Protocol, run_suite
    from .report import write_csv
    archs = list(archmod.BUILTIN_NAMES) if args.archs == "all" else _split(args.archs)
    arch_objs = [_arch(x) for x in archs]
    benches = []
    for b in (benchgen.DEFAULT_SUITE if args.benches == "default" else _split(args.benches)):
        try:
            benches.append(benchgen.file_spec(b) if b.endswith(".qasm") else benchgen.spec_for(b))
        except (ValueError, OSError, QasmError) as exc:
            raise CliError(str(exc)) from None
    protocol = Protocol(
        routers=tuple(_split(args.routers)),
        opt_levels=tuple(int(x) for x in _split(args.levels)),
        trials=args.trials, simulate=args.simulate, seed_base=args.seed, sabre=_sabre(args),
        timing=args.timing == "wall", verify=args.verify)
    for spec in benches:
        for a in arch_objs:
            if spec.num_qubits > a.num_qubits:
                raise CliError(f"{spec.name} needs {spec.num_qubits} qubits; {a.name} has {a.num_qubits}")

    def progress(b, a):
        if not args.quiet:
            print(f"done {b} on {a}", file=sys.stderr)

    records = run_suite(benches, arch_objs, protocol, _error_model(args), jobs=args.jobs, progress=progress)
    write_csv(records, args.out)
    n_sel = sum(r.selected for r in records)
    print(f"records={len(records)} selected={n_sel} out={args.out}")


def cmd_report(args):
    from .report import ReportError, read_csv, write_report
    try:
        written = write_report(read_csv(args.results), args.out_dir, args.aggregate)
    except (OSError, ReportError) as exc:
        raise CliError(str(exc)) from None
    for p in written:
        print(p)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qarchbench", description="Connectivity benchmarks for 32-qubit layouts.")
    p.add_argument("--max-qubits", type=int,
                   help=f"statevector qubit cap (also ${MAX_QUBITS_ENV}; default 24)")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("list-archs", help="built-in architectures with n_con and connectivity")
    s.set_defaults(func=cmd_list_archs)

    s = sub.add_parser("show-arch", help="print an architecture (built-in name or JSON file)")
    s.add_argument("name")
    fmt = s.add_mutually_exclusive_group()
    fmt.add_argument("--dot", action="store_true", help="Graphviz DOT output")
    fmt.add_argument("--json", action="store_true", help="architecture file format")
    s.set_defaults(func=cmd_show_arch)

    s = sub.add_parser("gen-bench", help="write a benchmark circuit as OpenQASM 2.0")
    s.add_argument("family", choices=sorted(benchgen.GENERATORS))
    s.add_argument("--qubits", type=int, required=True)
    s.add_argument("-o", "--output", help="output file (default stdout)")
    s.set_defaults(func=cmd_gen_bench)

    s = sub.add_parser("transpile", help="transpile one circuit for one architecture")
    s.add_argument("input")
    s.add_argument("output", nargs="?")
    s.add_argument("--arch", required=True)
    s.add_argument("--router", choices=("basic", "sabre"), default="sabre")
    s.add_argument("--opt", type=int, choices=(0, 1, 2, 3), default=1)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--layout", choices=("auto", "trivial", "sabre"), default="auto")
    _add_sabre_args(s)
    _add_model_args(s)
    s.set_defaults(func=cmd_transpile)

    s = sub.add_parser("simulate", help="statevector simulation; prints the top-k basis states")
    s.add_argument("input")
    s.add_argument("--top", type=int, default=8)
    s.add_argument("--qubits", help="comma-separated subset to marginalize onto")
    s.add_argument("--initial", help="initial basis label, most-significant qubit first")
    s.set_defaults(func=cmd_simulate)

    s = sub.add_parser("run", help="full protocol over benchmarks x architectures")
    s.add_argument("--archs", default="all", help="'all' or comma-separated names/files")
    s.add_argument("--benches", default="default", help="'default' or comma-separated names/.qasm files")
    s.add_argument("--trials", type=int, default=10)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--routers", default="basic,sabre")
    s.add_argument("--levels", default="0,1,2,3")
    s.add_argument("--out", required=True)
    s.add_argument("--simulate", action="store_true", help="time simulations of selected outputs")
    s.add_argument("--verify", action="store_true", help="check selected outputs by statevector")
    s.add_argument("--timing", choices=("wall", "off"), default="wall",
                   help="'off' leaves timing columns blank so reruns are byte-identical")
    s.add_argument("--jobs", type=int, default=None, help="worker processes (default: CPU count)")
    s.add_argument("-q", "--quiet", action="store_true")
    _add_sabre_args(s)
    _add_model_args(s)
    s.set_defaults(func=cmd_run)

    s = sub.add_parser("report", help="plot-data tables from a results CSV")
    s.add_argument("results")
    s.add_argument("--out-dir", required=True)
    s.add_argument("--aggregate", choices=("selected", "mean"), default="selected")
    s.set_defaults(func=cmd_report)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.max_qubits is not None:
        os.environ[MAX_QUBITS_ENV] = str(args.max_qubits)
    try:
        args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
