"""Compare the compiled kernels with the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat N]

Times SABRE routing (layout + routing on qft_32) and statevector simulation
(qft_20) under both backends and checks that they produce the same results.
"""
import argparse
import contextlib
import statistics
import sys
import time

import numpy as np

from qarchbench import _pykernels, benchgen
from qarchbench.arch import builtin
from qarchbench.simulator import simulate
from qarchbench.transpiler import TranspileConfig, decompose_to_native, transpile
from qarchbench.transpiler import layout as layout_mod
from qarchbench.transpiler import routing as routing_mod
import qarchbench.simulator as sim_mod

try:
    from qarchbench import _kernels
except ImportError:
    _kernels = None

PATCHED = (layout_mod, routing_mod, sim_mod)


@contextlib.contextmanager
def backend(module):
    saved = [m.kernels for m in PATCHED]
    for m in PATCHED:
        m.kernels = module
    try:
        yield
    finally:
        for m, k in zip(PATCHED, saved):
            m.kernels = k


def timed(fn, repeat):
    times, result = [], None
    for _ in range(repeat):
        t = time.perf_counter()
        result = fn()
        times.append(time.perf_counter() - t)
    return statistics.median(times), result


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=3)
    p.add_argument("--sim-qubits", type=int, default=20)
    args = p.parse_args(argv)
    if _kernels is None:
        print("compiled kernels not built; run `pip install -e . --no-build-isolation` first")
        return 1

    route_circ = benchgen.qft(32)
    arch = builtin("r4")
    cfg = TranspileConfig("sabre", 1, seed=7)
    sim_circ = decompose_to_native(benchgen.qft(args.sim_qubits))

    cases = [
        ("sabre layout+route qft_32 on r4", lambda: transpile(route_circ, arch, cfg),
         lambda a, b: a.circuit == b.circuit and a.final_layout == b.final_layout),
        (f"simulate qft_{args.sim_qubits} ({len(sim_circ.ops)} native ops)", lambda: simulate(sim_circ),
         lambda a, b: np.allclose(a.state.amplitudes, b.state.amplitudes, atol=1e-12)),
    ]
    print(f"{'case':<44}{'python s':>10}{'cython s':>10}{'speedup':>9}  same")
    for name, fn, same in cases:
        with backend(_pykernels):
            t_py, r_py = timed(fn, args.repeat)
        with backend(_kernels):
            t_cy, r_cy = timed(fn, args.repeat)
        print(f"{name:<44}{t_py:>10.4f}{t_cy:>10.4f}{t_py / t_cy:>8.1f}x  {same(r_py, r_cy)}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
