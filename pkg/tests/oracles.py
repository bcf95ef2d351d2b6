"""Slow, independent reference implementations used to check the fast code."""
from __future__ import annotations

import cmath
import itertools
import math
from collections import deque

import numpy as np

from qarchbench.circuit import GateKind

_S2 = 1 / math.sqrt(2)


def gate_matrix(op) -> np.ndarray:
    """Textbook matrices written out independently of qarchbench.gates."""
    k, p = op.kind, op.params
    if k is GateKind.H:
        return np.array([[_S2, _S2], [_S2, -_S2]], dtype=complex)
    if k is GateKind.X:
        return np.array([[0, 1], [1, 0]], dtype=complex)
    if k is GateKind.SX:
        return 0.5 * np.array([[1 + 1j, 1 - 1j], [1 - 1j, 1 + 1j]])
    if k is GateKind.RZ:
        return np.diag([cmath.exp(-0.5j * p[0]), cmath.exp(0.5j * p[0])])
    if k is GateKind.RX:
        c, s = math.cos(p[0] / 2), math.sin(p[0] / 2)
        return np.array([[c, -1j * s], [-1j * s, c]])
    if k is GateKind.U:
        t, f, lam = p
        c, s = math.cos(t / 2), math.sin(t / 2)
        return np.array([[c, -cmath.exp(1j * lam) * s],
                         [cmath.exp(1j * f) * s, cmath.exp(1j * (f + lam)) * c]])
    raise ValueError(k)


def full_unitary(circuit) -> np.ndarray:
    """Explicit 2^n x 2^n product; qubit 0 is the least-significant index bit."""
    n = circuit.num_qubits
    dim = 2 ** n
    total = np.eye(dim, dtype=complex)
    for op in circuit.ops:
        if not op.kind.is_unitary:
            continue
        u = np.zeros((dim, dim), dtype=complex)
        if len(op.qubits) == 1:
            q = op.qubits[0]
            g = gate_matrix(op)
            for col in range(dim):
                b = (col >> q) & 1
                for r in (0, 1):
                    u[col & ~(1 << q) | (r << q), col] += g[r, b]
        else:
            a, b = op.qubits
            for col in range(dim):
                ba, bb = (col >> a) & 1, (col >> b) & 1
                if op.kind is GateKind.CX:
                    row = col ^ (1 << b) if ba else col
                    u[row, col] = 1
                elif op.kind is GateKind.SWAP:
                    row = col & ~(1 << a) & ~(1 << b) | (bb << a) | (ba << b)
                    u[row, col] = 1
                elif op.kind is GateKind.CP:
                    u[col, col] = cmath.exp(1j * op.params[0]) if ba and bb else 1
                else:
                    raise ValueError(op.kind)
        total = u @ total
    return total


def floyd_warshall(n, edges) -> np.ndarray:
    inf = 10 ** 9
    d = np.full((n, n), inf, dtype=np.int64)
    np.fill_diagonal(d, 0)
    for a, b in edges:
        d[a, b] = 1
    for k in range(n):
        d = np.minimum(d, d[:, [k]] + d[[k], :])
    return d


def min_swaps(pairs, n, edges) -> int:
    """Fewest SWAPs to run the two-qubit gate sequence in order from the identity placement.

    0-1 BFS over (next gate, placement); executing a coupled gate is free.
    """
    edge_set = set(edges)
    undirected = sorted({(min(a, b), max(a, b)) for a, b in edges})
    start = (0, tuple(range(n)))
    dist = {start: 0}
    dq = deque([start])
    while dq:
        state = dq.popleft()
        k, l2p = state
        d = dist[state]
        if k == len(pairs):
            return d
        a, b = pairs[k]
        if (l2p[a], l2p[b]) in edge_set:
            nxt = (k + 1, l2p)
            if dist.get(nxt, math.inf) > d:
                dist[nxt] = d
                dq.appendleft(nxt)
            continue
        for x, y in undirected:
            new = tuple(y if p == x else x if p == y else p for p in l2p)
            nxt = (k, new)
            if dist.get(nxt, math.inf) > d + 1:
                dist[nxt] = d + 1
                dq.append(nxt)
    raise RuntimeError("unreachable")


def all_layout_costs(pairs, n, edges):
    """SWAP-free feasibility of every injective placement (tiny instances only)."""
    edge_set = set(edges)
    nq = 1 + max(max(p) for p in pairs)
    out = {}
    for perm in itertools.permutations(range(n), nq):
        out[perm] = all((perm[a], perm[b]) in edge_set for a, b in pairs)
    return out


def _is_connected(n, edges) -> bool:
    seen, stack = {0}, [0]
    while stack:
        u = stack.pop()
        for a, b in edges:
            for x, y in ((a, b), (b, a)):
                if x == u and y not in seen:
                    seen.add(y)
                    stack.append(y)
    return len(seen) == n


def connected_graphs(n: int) -> list[list[tuple[int, int]]]:
    """One labeled representative per isomorphism class of connected graphs on n nodes."""
    pairs = list(itertools.combinations(range(n), 2))
    perms = list(itertools.permutations(range(n)))
    seen, out = set(), []
    for mask in range(1 << len(pairs)):
        edges = [p for i, p in enumerate(pairs) if mask >> i & 1]
        if not _is_connected(n, edges):
            continue
        canon = min(tuple(sorted(tuple(sorted((pm[a], pm[b]))) for a, b in edges)) for pm in perms)
        if canon not in seen:
            seen.add(canon)
            out.append(list(canon))
    return out


def min_swaps_table(n, edges, max_len):
    """min_swaps for every gate sequence of length 1..max_len at once.

    f[placement] = fewest SWAPs to have executed the prefix and sit in that
    placement; extending by a gate relaxes through the placement swap-distance
    matrix and masks out placements where the gate is uncoupled.
    """
    edge_set = set(edges) | {(b, a) for a, b in edges}
    undirected = sorted({(min(a, b), max(a, b)) for a, b in edges})
    places = list(itertools.permutations(range(n)))
    index = {p: i for i, p in enumerate(places)}
    m = len(places)
    nbr = [[index[tuple(y if q == x else x if q == y else q for q in p)] for x, y in undirected] for p in places]
    sd = np.full((m, m), np.inf)
    for s in range(m):
        sd[s, s] = 0
        dq = deque([s])
        while dq:
            u = dq.popleft()
            for v in nbr[u]:
                if sd[s, v] == np.inf:
                    sd[s, v] = sd[s, u] + 1
                    dq.append(v)
    gates = list(itertools.permutations(range(n), 2))
    masks = {g: np.array([(p[g[0]], p[g[1]]) in edge_set for p in places]) for g in gates}
    out = {}
    start = np.full(m, np.inf)
    start[index[tuple(range(n))]] = 0

    def extend(prefix, f):
        reach = (f[:, None] + sd).min(axis=0)
        for g in gates:
            h = np.where(masks[g], reach, np.inf)
            seq = prefix + (g,)
            out[seq] = int(h.min())
            if len(seq) < max_len:
                extend(seq, h)

    extend((), start)
    return out
