"""SWAP insertion so every two-qubit gate lands on a coupled pair."""
from __future__ import annotations

import time

import numpy as np

from .._accel import kernels
from ..arch import Architecture
from ..circuit import Circuit, GateKind, Op
from .layout import Layout, LayoutError, kernel_arrays
from .outcome import SabreParams, TranspileConfig, TranspileOutcome


class RoutingError(RuntimeError):
    pass


def _check_layout(circuit: Circuit, arch: Architecture, layout: Layout) -> None:
    if len(layout.l2p) != arch.num_qubits:
        raise LayoutError(f"layout covers {len(layout.l2p)} qubits, {arch.name} has {arch.num_qubits}")
    if layout.num_logical != circuit.num_qubits:
        raise LayoutError(f"layout places {layout.num_logical} qubits, circuit has {circuit.num_qubits}")


def _swap(a: int, b: int) -> Op:
    return Op(GateKind.SWAP, (min(a, b), max(a, b)))


BASIC_LOOKAHEAD = 3
BASIC_MAX_PATHS = 8
BASIC_SHORTLIST = 4
BASIC_ROLLOUT_PATHS = 2


def shortest_paths(dist, nbrs, a: int, b: int, limit: int = BASIC_MAX_PATHS) -> list[list[int]]:
    """Up to `limit` shortest a->b paths, lowest-index neighbors first."""
    out: list[list[int]] = []
    path = [a]

    def extend():
        if len(out) >= limit:
            return
        u = path[-1]
        if u == b:
            out.append(list(path))
            return
        for v in nbrs[u]:
            if dist[v][b] == dist[u][b] - 1:
                path.append(v)
                extend()
                path.pop()

    extend()
    return out


def _moved(path, k):
    """Physical relocation when the endpoints walk k and d-1-k steps toward each other."""
    d = len(path) - 1
    move = {path[0]: path[k], path[d]: path[k + 1]}
    for i in range(1, k + 1):
        move[path[i]] = path[i - 1]
    for i in range(k + 1, d):
        move[path[i]] = path[i + 1]
    return move


def _candidates(dist, nbrs, pa, pb, max_paths):
    """(path, k, move) for every shortest path and meeting point, first qubit moving furthest first."""
    d = dist[pa][pb]
    for path in shortest_paths(dist, nbrs, pa, pb, max_paths):
        for k in range(d - 1, -1, -1):
            yield path, k, _moved(path, k)


def _weighted_distance(dist, l2p, move, window):
    cost = 0.0
    for w, (x, y) in enumerate(window):
        px, py = l2p[x], l2p[y]
        cost += dist[move.get(px, px)][move.get(py, py)] * 0.5 ** w
    return cost


def _rollout(dist, nbrs, l2p, window):
    """(SWAPs, leftover distance) to run `window` greedily by weighted distance."""
    l2p = list(l2p)
    swaps = 0
    for g, (a, b) in enumerate(window):
        pa, pb = l2p[a], l2p[b]
        d = dist[pa][pb]
        if d <= 1:
            continue
        swaps += d - 1
        rest = window[g + 1:]
        best, best_cost = None, None
        for _, _, move in _candidates(dist, nbrs, pa, pb, BASIC_ROLLOUT_PATHS):
            cost = _weighted_distance(dist, l2p, move, rest)
            if best_cost is None or cost < best_cost - 1e-12:
                best, best_cost = move, cost
        l2p = [best.get(p, p) for p in l2p]
    return swaps, sum(dist[l2p[x]][l2p[y]] for x, y in window)


def basic_step(dist, nbrs, l2p, gate, window, max_paths: int = BASIC_MAX_PATHS,
               shortlist: int = BASIC_SHORTLIST):
    """SWAPs (physical pairs) that make `gate` coupled, and the resulting physical move map.

    Candidates (shortest path x meeting point) are ranked by the weighted
    distance of the `window` gates that follow; the best `shortlist` are then
    compared by the SWAPs a greedy rollout of that window needs. Ties keep the
    earlier candidate, so the choice is deterministic.
    """
    pa, pb = l2p[gate[0]], l2p[gate[1]]
    d = dist[pa][pb]
    if d <= 1:
        return (), {}
    ranked = sorted(
        ((_weighted_distance(dist, l2p, move, window), n, path, k, move)
         for n, (path, k, move) in enumerate(_candidates(dist, nbrs, pa, pb, max_paths))),
        key=lambda c: (c[0], c[1]))
    best, best_cost = None, None
    for _, _, path, k, move in ranked[:shortlist]:
        cost = _rollout(dist, nbrs, [move.get(p, p) for p in l2p], window)
        if best_cost is None or cost < best_cost:
            best, best_cost = (path, k, move), cost
    path, k, move = best
    steps = [(path[s], path[s + 1]) for s in range(k)]
    steps += [(path[d - s], path[d - s - 1]) for s in range(d - 1 - k)]
    return tuple(steps), move


def basic_plan(pairs, dist, nbrs, l2p, lookahead: int = BASIC_LOOKAHEAD, **kwargs):
    """basic_step for each gate in order; updates `l2p` in place."""
    plan = []
    for g, gate in enumerate(pairs):
        steps, move = basic_step(dist, nbrs, l2p, gate, pairs[g + 1:g + 1 + lookahead], **kwargs)
        plan.append(steps)
        if move:
            l2p[:] = [move.get(p, p) for p in l2p]
    return plan


def route_basic(circuit: Circuit, arch: Architecture, layout: Layout, **kwargs):
    """Greedy shortest-path SWAP insertion, see basic_plan."""
    l2p = list(layout.l2p)
    pairs = [op.qubits for op in circuit.ops if op.is_two_qubit]
    plan = iter(basic_plan(pairs, arch.distance.tolist(), arch.neighbors, list(l2p), **kwargs))
    p2l = list(layout.p2l)
    out, swaps = [], 0
    for op in circuit.ops:
        if op.is_two_qubit:
            for x, y in next(plan):
                out.append(_swap(x, y))
                swaps += 1
                lx, ly = p2l[x], p2l[y]
                p2l[x], p2l[y] = ly, lx
                l2p[lx], l2p[ly] = y, x
        out.append(op.remap(l2p))
    return out, l2p, swaps


def route_sabre(circuit: Circuit, arch: Architecture, layout: Layout, seed: int = 0,
                params: SabreParams | None = None):
    params = params or SabreParams()
    ptr, idx = arch.neighbor_csr
    l2p0 = np.asarray(layout.l2p, dtype=np.int32)
    events, final = kernels.sabre_route(arch.distance, ptr, idx, *kernel_arrays(circuit), l2p0,
                                        seed=seed, **params.as_kwargs())
    n = arch.num_qubits
    l2p = list(layout.l2p)
    p2l = list(layout.p2l)
    ops = circuit.ops
    out, swaps = [], 0
    for e in events.tolist():
        if e >= 0:
            out.append(ops[e].remap(l2p))
        else:
            a, b = divmod(-e - 1, n)
            out.append(Op(GateKind.SWAP, (a, b)))
            swaps += 1
            la, lb = p2l[a], p2l[b]
            p2l[a], p2l[b] = lb, la
            l2p[la], l2p[lb] = b, a
    if l2p != final.tolist():
        raise RoutingError("kernel final layout disagrees with replayed SWAP events")
    return out, l2p, swaps


def route(circuit: Circuit, arch: Architecture, layout: Layout, router: str = "sabre", seed: int = 0,
          params: SabreParams | None = None) -> TranspileOutcome:
    """Route a native circuit; the output acts on physical qubits and still contains SWAP ops."""
    _check_layout(circuit, arch, layout)
    start = time.perf_counter()
    if router == "basic":
        ops, l2p, swaps = route_basic(circuit, arch, layout)
    elif router == "sabre":
        ops, l2p, swaps = route_sabre(circuit, arch, layout, seed, params)
    else:
        raise ValueError(f"unknown router {router!r}")
    out = Circuit(arch.num_qubits, tuple(ops), circuit.num_clbits, circuit.name)
    config = TranspileConfig(router=router, opt_level=0, seed=seed, sabre=params or SabreParams())
    return TranspileOutcome(out, layout, Layout(tuple(l2p), layout.num_logical),
                            time.perf_counter() - start, config, swaps)


def uncoupled_gates(circuit: Circuit, arch: Architecture) -> list[int]:
    """Indices of two-qubit ops that do not sit on an edge of the architecture."""
    return [i for i, op in enumerate(circuit.ops) if op.is_two_qubit and op.qubits not in arch.edges]
