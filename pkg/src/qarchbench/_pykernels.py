"""
Pure-Python/numpy kernels. Reference semantics for the compiled `_kernels`
extension; both must produce identical routing event streams for the same
inputs (shared splitmix64 stream, same float evaluation order).

Routing event encoding:
    e >= 0          -> op index e executed
    e < 0           -> swap of physical pair (a, b), a < b, e = -(1 + a*n + b)
"""
from __future__ import annotations

import numpy as np

_MASK = (1 << 64) - 1
TIE_TOL = 1e-10


class SplitMix64:
    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = seed & _MASK

    def next(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)


def sabre_route(dist, nbr_ptr, nbr_idx, qptr, qarg, needs_adj, l2p,
                ext_size=20, ext_weight=0.5, decay_delta=0.001, decay_reset=5,
                seed=0, max_stall=-1):
    n = len(l2p)
    m = len(qptr) - 1
    D = [list(map(int, row)) for row in np.asarray(dist)]
    nbrs = [list(map(int, nbr_idx[nbr_ptr[p]:nbr_ptr[p + 1]])) for p in range(n)]
    ops = [tuple(int(x) for x in qarg[qptr[i]:qptr[i + 1]]) for i in range(m)]
    adj = [bool(needs_adj[i]) and len(ops[i]) == 2 for i in range(m)]
    l2p = [int(x) for x in l2p]
    p2l = [0] * n
    for lq, p in enumerate(l2p):
        p2l[p] = lq
    if max_stall < 0:
        max_stall = 10 * n + 100

    succ = [[] for _ in range(m)]
    indeg = [0] * m
    last = [-1] * n
    for i, qs in enumerate(ops):
        preds = set()
        for q in qs:
            if last[q] >= 0:
                preds.add(last[q])
            last[q] = i
        for p in sorted(preds):
            succ[p].append(i)
        indeg[i] = len(preds)

    rng = SplitMix64(seed)
    events: list[int] = []
    decay = [1.0] * n
    swaps_since_reset = 0
    stalled = 0
    front = [i for i in range(m) if indeg[i] == 0]

    def executable(i):
        if not adj[i]:
            return True
        a, b = ops[i]
        return D[l2p[a]][l2p[b]] == 1

    def do_swap(a, b):
        la, lb = p2l[a], p2l[b]
        p2l[a], p2l[b] = lb, la
        l2p[la], l2p[lb] = b, a
        events.append(-(1 + a * n + b))

    while True:
        executed_any = False
        while True:
            progress = False
            nxt = []
            for i in front:
                if executable(i):
                    events.append(i)
                    progress = True
                    for s in succ[i]:
                        indeg[s] -= 1
                        if indeg[s] == 0:
                            nxt.append(s)
                else:
                    nxt.append(i)
            nxt.sort()
            front = nxt
            if not progress:
                break
            executed_any = True
        if not front:
            break
        if executed_any:
            decay = [1.0] * n
            swaps_since_reset = 0
            stalled = 0

        if stalled >= max_stall:
            a, b = ops[front[0]]
            pa, pb = l2p[a], l2p[b]
            while D[pa][pb] > 1:
                for nb in nbrs[pa]:
                    if D[nb][pb] == D[pa][pb] - 1:
                        break
                do_swap(min(pa, nb), max(pa, nb))
                pa = nb
            decay = [1.0] * n
            swaps_since_reset = 0
            stalled = 0
            continue

        ext = []
        seen = set(front)
        queue = list(front)
        qi = 0
        while qi < len(queue) and len(ext) < ext_size:
            i = queue[qi]
            qi += 1
            for s in succ[i]:
                if s in seen:
                    continue
                seen.add(s)
                if adj[s]:
                    ext.append(s)
                    if len(ext) >= ext_size:
                        break
                queue.append(s)

        cands = set()
        for i in front:
            for q in ops[i]:
                p = l2p[q]
                for nb in nbrs[p]:
                    cands.add(p * n + nb if p < nb else nb * n + p)
        cands = sorted(cands)

        scores = []
        n_ext = len(ext)
        for c in cands:
            a, b = divmod(c, n)
            la, lb = p2l[a], p2l[b]
            l2p[la], l2p[lb] = b, a
            f = 0
            for i in front:
                x, y = ops[i]
                f += D[l2p[x]][l2p[y]]
            h = float(f)
            if n_ext:
                e = 0
                for i in ext:
                    x, y = ops[i]
                    e += D[l2p[x]][l2p[y]]
                h = h + ext_weight * (float(e) / float(n_ext))
            h = h * max(decay[a], decay[b])
            l2p[la], l2p[lb] = a, b
            scores.append(h)

        best = min(scores)
        ties = [c for c, h in zip(cands, scores) if h - best <= TIE_TOL]
        pick = ties[0] if len(ties) == 1 else ties[rng.next() % len(ties)]
        a, b = divmod(pick, n)
        do_swap(a, b)
        decay[a] += decay_delta
        decay[b] += decay_delta
        swaps_since_reset += 1
        stalled += 1
        if swaps_since_reset >= decay_reset:
            decay = [1.0] * n
            swaps_since_reset = 0

    return np.asarray(events, dtype=np.int64), np.asarray(l2p, dtype=np.int32)


def _view(state, q):
    return state.reshape(-1, 2, 1 << q)


def apply_1q(state, q, m00, m01, m10, m11):
    v = _view(state, q)
    a0 = v[:, 0, :].copy()
    a1 = v[:, 1, :]
    v[:, 0, :] = m00 * a0 + m01 * a1
    v[:, 1, :] = m10 * a0 + m11 * a1


def apply_diag(state, q, d0, d1):
    v = _view(state, q)
    v[:, 0, :] *= d0
    v[:, 1, :] *= d1


def _pair_view(state, a, b):
    lo, hi = (a, b) if a < b else (b, a)
    v = state.reshape(-1, 2, 1 << (hi - lo - 1), 2, 1 << lo)
    return v, a < b


def apply_cx(state, c, t):
    v, c_low = _pair_view(state, c, t)
    if c_low:  # axis 3 is control, axis 1 is target
        tmp = v[:, 0, :, 1, :].copy()
        v[:, 0, :, 1, :] = v[:, 1, :, 1, :]
        v[:, 1, :, 1, :] = tmp
    else:
        tmp = v[:, 1, :, 0, :].copy()
        v[:, 1, :, 0, :] = v[:, 1, :, 1, :]
        v[:, 1, :, 1, :] = tmp


def apply_cphase(state, a, b, phase):
    v, _ = _pair_view(state, a, b)
    v[:, 1, :, 1, :] *= phase


def apply_swap(state, a, b):
    v, _ = _pair_view(state, a, b)
    tmp = v[:, 0, :, 1, :].copy()
    v[:, 0, :, 1, :] = v[:, 1, :, 0, :]
    v[:, 1, :, 0, :] = tmp
