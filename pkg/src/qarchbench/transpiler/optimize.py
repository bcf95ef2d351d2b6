"""Peephole optimization of native circuits.

Level 0 leaves the circuit alone. Level 1 resynthesizes runs of single-qubit
gates and cancels back-to-back CX pairs. Level 2 adds cancellation across
commuting gates (RZ past CX controls, X/SX past CX targets, CX pairs past
CXs sharing the same control or target). Level 3 also absorbs trailing SWAP
blocks into a relabeling of the output qubits.
"""
from __future__ import annotations

from ..circuit import Circuit, GateKind, Op
from ..gates import is_zero_angle, sequence_matrix, synthesize_1q, wrap_angle

_CX = GateKind.CX
_RZ = GateKind.RZ
_MAX_ROUNDS = 50


def _is_1q_unitary(op) -> bool:
    return op.kind.is_unitary and len(op.qubits) == 1


def _successors(ops):
    """Per-wire successor links: nxt[i][k] is the next op on wires[i][k], or -1.

    Links stay valid while a pass deletes ops; deleted ops are walked over.
    """
    last: dict[int, int] = {}
    nxt = [None] * len(ops)
    wires = [None] * len(ops)
    for i in range(len(ops) - 1, -1, -1):
        op = ops[i]
        if op is None:
            continue
        wires[i] = op.qubits
        nxt[i] = tuple(last.get(q, -1) for q in op.qubits)
        for q in op.qubits:
            last[q] = i
    return nxt, wires


def merge_1q_runs(ops: list) -> bool:
    """Replace each maximal single-qubit run with its shortest native form."""
    changed = False
    runs: dict[int, list[int]] = {}
    repl: dict[int, list[Op]] = {}

    def flush(q):
        nonlocal changed
        run = runs.pop(q, None)
        if not run:
            return
        if len(run) == 1:
            op = ops[run[0]]
            if op.kind is _RZ and is_zero_angle(op.params[0]):
                ops[run[0]] = None
                changed = True
            return
        seq = synthesize_1q(sequence_matrix([ops[i] for i in run]), q)
        if len(seq) < len(run):
            for i in run:
                ops[i] = None
            repl[run[0]] = seq
            changed = True

    for i, op in enumerate(ops):
        if op is None:
            continue
        if _is_1q_unitary(op):
            runs.setdefault(op.qubits[0], []).append(i)
        else:
            for q in op.qubits:
                flush(q)
    for q in list(runs):
        flush(q)
    if repl:
        out = []
        for i, op in enumerate(ops):
            if i in repl:
                out.extend(repl[i])
            elif op is not None:
                out.append(op)
        ops[:] = out
    return changed


def cancel_cx_pairs(ops: list, commute: bool) -> bool:
    """Remove CX(c,t)...CX(c,t) pairs with nothing (or only commuting gates) between."""
    nxt = _successors(ops)
    changed = False
    for i, op in enumerate(ops):
        if op is None or op.kind is not _CX:
            continue
        c, t = op.qubits
        jc = _walk(ops, nxt, i, c, lambda g: commute and _commutes_on_control(g, c, t))
        if jc < 0 or ops[jc].qubits != op.qubits or ops[jc].kind is not _CX:
            continue
        jt = _walk(ops, nxt, i, t, lambda g: commute and _commutes_on_target(g, c, t))
        if jt == jc:
            ops[i] = ops[jc] = None
            changed = True
    return changed


def _walk(ops, links, i, q, skip):
    """First live op after i on wire q that is not skippable, or -1."""
    nxt, wires = links
    j = nxt[i][wires[i].index(q)]
    while j >= 0:
        g = ops[j]
        if g is not None and not skip(g):
            return j
        j = nxt[j][wires[j].index(q)]
    return -1


def _commutes_on_control(g, c, t) -> bool:
    if g.kind is _RZ:
        return True
    return g.kind is _CX and g.qubits[0] == c and g.qubits[1] != t


def _commutes_on_target(g, c, t) -> bool:
    if g.kind in (GateKind.X, GateKind.SX):
        return True
    return g.kind is _CX and g.qubits[1] == t and g.qubits[0] != c


def commute_1q(ops: list) -> bool:
    """Merge RZs separated by CX controls and cancel X pairs separated by CX targets."""
    nxt = _successors(ops)
    changed = False
    for i, op in enumerate(ops):
        if op is None:
            continue
        if op.kind is _RZ:
            q = op.qubits[0]
            j = _walk(ops, nxt, i, q, lambda g: g.kind is _CX and g.qubits[0] == q)
            if j >= 0 and ops[j].kind is _RZ and _crosses_cx(ops, nxt, i, j, q):
                ops[j] = Op(_RZ, (q,), (wrap_angle(op.params[0] + ops[j].params[0]),))
                ops[i] = None
                changed = True
        elif op.kind is GateKind.X:
            q = op.qubits[0]
            j = _walk(ops, nxt, i, q, lambda g: (g.kind is _CX and g.qubits[1] == q) or g.kind is GateKind.SX)
            if j >= 0 and ops[j].kind is GateKind.X and _crosses_cx(ops, nxt, i, j, q):
                ops[i] = ops[j] = None
                changed = True
    return changed


def _crosses_cx(ops, nxt, i, j, q) -> bool:
    # adjacent pairs are left to merge_1q_runs so both passes agree on the result
    return _next_live(ops, nxt, i, q) != j


def _next_live(ops, nxt, i, q):
    return _walk(ops, nxt, i, q, lambda g: False)


def _predecessors(ops):
    last: dict[int, int] = {}
    prv = [None] * len(ops)
    wires = [None] * len(ops)
    for i, op in enumerate(ops):
        if op is None:
            continue
        wires[i] = op.qubits
        prv[i] = tuple(last.get(q, -1) for q in op.qubits)
        for q in op.qubits:
            last[q] = i
    return prv, wires


def absorb_trailing_swaps(ops: list, perm: list[int]) -> bool:
    """Drop CX-CX-CX swap blocks, and fold CX(a,b)CX(b,a) into CX(b,a), when no
    two-qubit gate follows on either wire. Single-qubit ops and measurements
    after the block move to the exchanged wire and perm records the exchange.

    Scans backwards so chains of trailing swaps go in one pass.
    """
    links = _predecessors(ops)
    blocked: set[int] = set()
    tail: dict[int, list[int]] = {}
    changed = False
    for k in range(len(ops) - 1, -1, -1):
        op = ops[k]
        if op is None:
            continue
        qs = op.qubits
        if len(qs) == 1 and op.kind is not GateKind.BARRIER:
            if qs[0] not in blocked:
                tail.setdefault(qs[0], []).append(k)
            continue
        if op.kind is not _CX or qs[0] in blocked or qs[1] in blocked:
            blocked.update(qs)
            continue
        a, b = qs
        j = _pair_prev(ops, links, k, a, b)
        if j < 0 or ops[j].kind is not _CX or ops[j].qubits != (b, a):
            blocked.update(qs)
            continue
        i = _pair_prev(ops, links, j, a, b)
        if i >= 0 and ops[i].kind is _CX and ops[i].qubits == (a, b):
            ops[i] = ops[j] = ops[k] = None
        else:
            ops[j] = None
            blocked.update(qs)
        tail[a], tail[b] = tail.get(b, []), tail.get(a, [])
        for x, p in enumerate(perm):
            perm[x] = b if p == a else a if p == b else p
        changed = True
    for q, idxs in tail.items():
        for x in idxs:
            g = ops[x]
            if g.qubits[0] != q:
                ops[x] = Op(g.kind, (q,), g.params, g.clbit)
    return changed


def _pair_prev(ops, links, i, a, b):
    ja = _walk(ops, links, i, a, lambda g: False)
    jb = _walk(ops, links, i, b, lambda g: False)
    return ja if ja == jb else -1


def optimize_with_permutation(circuit: Circuit, level: int) -> tuple[Circuit, list[int]]:
    """Optimize and return perm: the content the input leaves on wire p ends on wire perm[p]."""
    if level not in (0, 1, 2, 3):
        raise ValueError(f"optimization level must be 0..3, got {level}")
    perm = list(range(circuit.num_qubits))
    if level == 0:
        return circuit, perm
    ops = list(circuit.ops)
    for _ in range(_MAX_ROUNDS):
        changed = merge_1q_runs(ops)
        changed |= cancel_cx_pairs(ops, commute=level >= 2)
        if level >= 2:
            changed |= commute_1q(ops)
        if level >= 3:
            changed |= absorb_trailing_swaps(ops, perm)
        ops[:] = [op for op in ops if op is not None]
        if not changed:
            break
    return circuit.with_ops(ops), perm


def optimize(circuit: Circuit, level: int) -> Circuit:
    """Level 3 may relabel trailing qubits; use optimize_with_permutation to track it."""
    return optimize_with_permutation(circuit, level)[0]
