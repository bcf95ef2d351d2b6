"""decompose -> initial layout -> route -> expand SWAPs -> optimize."""
from __future__ import annotations

import time
from dataclasses import replace

from ..arch import Architecture
from ..circuit import Circuit
from .decompose import decompose_swaps, decompose_to_native
from .layout import Layout, initial_layout
from .optimize import optimize_with_permutation
from .outcome import TranspileConfig, TranspileOutcome
from .routing import route


def transpile(circuit: Circuit, arch: Architecture, config: TranspileConfig | None = None,
              layout: Layout | None = None) -> TranspileOutcome:
    """Deterministic in (circuit, arch, config); t_trans covers every stage."""
    config = config or TranspileConfig()
    start = time.perf_counter()
    native = decompose_to_native(circuit)
    if layout is None:
        layout = initial_layout(native, arch, config.layout_strategy, config.seed,
                                sabre_params=config.sabre.as_kwargs())
    routed = route(native, arch, layout, config.router, config.seed, config.sabre)
    expanded = routed.circuit.with_ops(decompose_swaps(routed.circuit.ops))
    out, perm = optimize_with_permutation(expanded, config.opt_level)
    final = Layout(tuple(perm[p] for p in routed.final_layout.l2p), layout.num_logical)
    t_trans = time.perf_counter() - start
    return TranspileOutcome(out, layout, final, t_trans, config, routed.num_swaps)


def with_seed(config: TranspileConfig, seed: int) -> TranspileConfig:
    return replace(config, seed=seed)
