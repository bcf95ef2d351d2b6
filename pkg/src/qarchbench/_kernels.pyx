# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels: SABRE swap search and in-place statevector updates.

Mirrors `_pykernels` exactly (same event stream, same RNG draws).
"""
import numpy as np
cimport numpy as cnp
from libc.stdint cimport uint64_t, int64_t, int32_t, uint8_t
from libc.stdlib cimport malloc, free
from libc.string cimport memset

cnp.import_array()

cdef double TIE_TOL = 1e-10


cdef inline uint64_t _splitmix(uint64_t* state) noexcept nogil:
    state[0] = state[0] + <uint64_t>0x9E3779B97F4A7C15ULL
    cdef uint64_t z = state[0]
    z = (z ^ (z >> 30)) * <uint64_t>0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * <uint64_t>0x94D049BB133111EBULL
    return z ^ (z >> 31)


cdef inline void _isort(int32_t* a, Py_ssize_t k) noexcept nogil:
    cdef Py_ssize_t i, j
    cdef int32_t x
    for i in range(1, k):
        x = a[i]
        j = i - 1
        while j >= 0 and a[j] > x:
            a[j + 1] = a[j]
            j -= 1
        a[j + 1] = x


cdef class _Events:
    cdef int64_t* buf
    cdef Py_ssize_t size, cap

    def __cinit__(self):
        self.cap = 1024
        self.size = 0
        self.buf = <int64_t*>malloc(self.cap * sizeof(int64_t))

    def __dealloc__(self):
        free(self.buf)

    cdef inline void push(self, int64_t v):
        cdef int64_t* nb
        cdef Py_ssize_t i
        if self.size == self.cap:
            nb = <int64_t*>malloc(2 * self.cap * sizeof(int64_t))
            for i in range(self.size):
                nb[i] = self.buf[i]
            free(self.buf)
            self.buf = nb
            self.cap *= 2
        self.buf[self.size] = v
        self.size += 1

    cdef object to_array(self):
        cdef Py_ssize_t i
        out = np.empty(self.size, dtype=np.int64)
        cdef int64_t[::1] o = out
        for i in range(self.size):
            o[i] = self.buf[i]
        return out


def sabre_route(dist, nbr_ptr, nbr_idx, qptr, qarg, needs_adj, l2p_in,
                int ext_size=20, double ext_weight=0.5, double decay_delta=0.001,
                int decay_reset=5, seed=0, int max_stall=-1):
    cdef const int32_t[:, ::1] D = np.ascontiguousarray(dist, dtype=np.int32)
    cdef const int32_t[::1] NP = np.ascontiguousarray(nbr_ptr, dtype=np.int32)
    cdef const int32_t[::1] NI = np.ascontiguousarray(nbr_idx, dtype=np.int32)
    cdef const int32_t[::1] QP = np.ascontiguousarray(qptr, dtype=np.int32)
    cdef const int32_t[::1] QA = np.ascontiguousarray(qarg, dtype=np.int32)
    cdef const uint8_t[::1] NA = np.ascontiguousarray(needs_adj, dtype=np.uint8)
    l2p_arr = np.array(l2p_in, dtype=np.int32)
    cdef int32_t[::1] l2p = l2p_arr
    cdef Py_ssize_t n = l2p.shape[0]
    cdef Py_ssize_t m = QP.shape[0] - 1
    if max_stall < 0:
        max_stall = 10 * n + 100

    p2l_arr = np.empty(n, dtype=np.int32)
    cdef int32_t[::1] p2l = p2l_arr
    cdef Py_ssize_t i, j, k, s, q
    for i in range(n):
        p2l[l2p[i]] = i

    # 2q-adjacency flag, first two qubits per op
    adj_arr = np.zeros(m, dtype=np.uint8)
    q0_arr = np.zeros(m, dtype=np.int32)
    q1_arr = np.zeros(m, dtype=np.int32)
    cdef uint8_t[::1] adj = adj_arr
    cdef int32_t[::1] Q0 = q0_arr
    cdef int32_t[::1] Q1 = q1_arr
    for i in range(m):
        if NA[i] and QP[i + 1] - QP[i] == 2:
            adj[i] = 1
            Q0[i] = QA[QP[i]]
            Q1[i] = QA[QP[i] + 1]

    # dependency DAG (successors in CSR, deduplicated, ascending)
    last_arr = np.full(n, -1, dtype=np.int32)
    cdef int32_t[::1] last = last_arr
    indeg_arr = np.zeros(m, dtype=np.int32)
    cdef int32_t[::1] indeg = indeg_arr
    sdeg_arr = np.zeros(m + 1, dtype=np.int32)
    cdef int32_t[::1] sdeg = sdeg_arr
    mark_arr = np.full(m, -1, dtype=np.int32)
    cdef int32_t[::1] mark = mark_arr
    cdef int32_t p
    for i in range(m):
        for k in range(QP[i], QP[i + 1]):
            p = last[QA[k]]
            if p >= 0 and mark[p] != i:
                mark[p] = i
                indeg[i] += 1
                sdeg[p + 1] += 1
            last[QA[k]] = i
    for i in range(m):
        sdeg[i + 1] += sdeg[i]
    succ_arr = np.zeros(max(sdeg[m], 1), dtype=np.int32)
    cdef int32_t[::1] succ = succ_arr
    fill_arr = np.zeros(m, dtype=np.int32)
    cdef int32_t[::1] fill = fill_arr
    last[:] = -1
    mark[:] = -1
    for i in range(m):
        for k in range(QP[i], QP[i + 1]):
            p = last[QA[k]]
            if p >= 0 and mark[p] != i:
                mark[p] = i
                succ[sdeg[p] + fill[p]] = i
                fill[p] += 1
            last[QA[k]] = i
    # successors were appended in increasing i, already ascending

    cdef _Events events = _Events()
    decay_arr = np.ones(n, dtype=np.float64)
    cdef double[::1] decay = decay_arr
    cdef int swaps_since_reset = 0
    cdef int stalled = 0
    cdef uint64_t rng = <uint64_t>(int(seed) & 0xFFFFFFFFFFFFFFFF)

    front_arr = np.empty(m + 1, dtype=np.int32)
    nxt_arr = np.empty(m + 1, dtype=np.int32)
    cdef int32_t[::1] front = front_arr
    cdef int32_t[::1] nxt = nxt_arr
    cdef Py_ssize_t nf = 0, nn
    for i in range(m):
        if indeg[i] == 0:
            front[nf] = i
            nf += 1

    ext_arr = np.empty(max(ext_size, 1), dtype=np.int32)
    cdef int32_t[::1] ext = ext_arr
    queue_arr = np.empty(m + 1, dtype=np.int32)
    cdef int32_t[::1] queue = queue_arr
    seen_arr = np.zeros(m, dtype=np.int32)
    cdef int32_t[::1] seen = seen_arr
    cdef int32_t stamp = 0
    cand_arr = np.empty(n * n, dtype=np.int32)
    cdef int32_t[::1] cand = cand_arr
    cseen_arr = np.zeros(n * n, dtype=np.int32)
    cdef int32_t[::1] cseen = cseen_arr
    score_arr = np.empty(n * n, dtype=np.float64)
    cdef double[::1] score = score_arr
    cdef Py_ssize_t nc, ne, qi, qn, nt
    cdef bint progress, executed_any, ok
    cdef int32_t a, b, la, lb, pa, pb, nb, x, y, c
    cdef int64_t f, e
    cdef double h, best, da, db
    cdef uint64_t r

    while True:
        executed_any = False
        while True:
            progress = False
            nn = 0
            for j in range(nf):
                i = front[j]
                if adj[i]:
                    ok = D[l2p[Q0[i]], l2p[Q1[i]]] == 1
                else:
                    ok = True
                if ok:
                    events.push(i)
                    progress = True
                    for k in range(sdeg[i], sdeg[i + 1]):
                        s = succ[k]
                        indeg[s] -= 1
                        if indeg[s] == 0:
                            nxt[nn] = s
                            nn += 1
                else:
                    nxt[nn] = i
                    nn += 1
            _isort(&nxt[0], nn)
            for j in range(nn):
                front[j] = nxt[j]
            nf = nn
            if not progress:
                break
            executed_any = True
        if nf == 0:
            break
        if executed_any:
            decay[:] = 1.0
            swaps_since_reset = 0
            stalled = 0

        if stalled >= max_stall:
            i = front[0]
            pa = l2p[Q0[i]]
            pb = l2p[Q1[i]]
            while D[pa, pb] > 1:
                nb = pa
                for k in range(NP[pa], NP[pa + 1]):
                    if D[NI[k], pb] == D[pa, pb] - 1:
                        nb = NI[k]
                        break
                a = pa if pa < nb else nb
                b = nb if pa < nb else pa
                la = p2l[a]; lb = p2l[b]
                p2l[a] = lb; p2l[b] = la
                l2p[la] = b; l2p[lb] = a
                events.push(-(1 + <int64_t>a * n + b))
                pa = nb
            decay[:] = 1.0
            swaps_since_reset = 0
            stalled = 0
            continue

        # extended set: BFS over successors of the front layer
        stamp += 1
        for j in range(nf):
            seen[front[j]] = stamp
            queue[j] = front[j]
        qn = nf
        qi = 0
        ne = 0
        while qi < qn and ne < ext_size:
            i = queue[qi]
            qi += 1
            for k in range(sdeg[i], sdeg[i + 1]):
                s = succ[k]
                if seen[s] == stamp:
                    continue
                seen[s] = stamp
                if adj[s]:
                    ext[ne] = s
                    ne += 1
                    if ne >= ext_size:
                        break
                queue[qn] = s
                qn += 1

        # candidate swaps touching front-layer qubits
        nc = 0
        for j in range(nf):
            i = front[j]
            for q in range(2):
                pa = l2p[Q0[i]] if q == 0 else l2p[Q1[i]]
                for k in range(NP[pa], NP[pa + 1]):
                    nb = NI[k]
                    c = pa * n + nb if pa < nb else nb * n + pa
                    if cseen[c] != stamp:
                        cseen[c] = stamp
                        cand[nc] = c
                        nc += 1
        _isort(&cand[0], nc)

        best = 1e300
        for j in range(nc):
            a = cand[j] // n
            b = cand[j] % n
            la = p2l[a]; lb = p2l[b]
            l2p[la] = b; l2p[lb] = a
            f = 0
            for k in range(nf):
                i = front[k]
                f += D[l2p[Q0[i]], l2p[Q1[i]]]
            h = <double>f
            if ne > 0:
                e = 0
                for k in range(ne):
                    i = ext[k]
                    e += D[l2p[Q0[i]], l2p[Q1[i]]]
                h = h + ext_weight * (<double>e / <double>ne)
            da = decay[a]; db = decay[b]
            h = h * (da if da > db else db)
            l2p[la] = a; l2p[lb] = b
            score[j] = h
            if h < best:
                best = h

        nt = 0
        for j in range(nc):
            if score[j] - best <= TIE_TOL:
                cand[nt] = cand[j]
                nt += 1
        if nt == 1:
            c = cand[0]
        else:
            r = _splitmix(&rng)
            c = cand[<Py_ssize_t>(r % <uint64_t>nt)]
        a = c // n
        b = c % n
        la = p2l[a]; lb = p2l[b]
        p2l[a] = lb; p2l[b] = la
        l2p[la] = b; l2p[lb] = a
        events.push(-(1 + <int64_t>a * n + b))
        decay[a] += decay_delta
        decay[b] += decay_delta
        swaps_since_reset += 1
        stalled += 1
        if swaps_since_reset >= decay_reset:
            decay[:] = 1.0
            swaps_since_reset = 0

    return events.to_array(), l2p_arr


def apply_1q(cnp.ndarray state, int q, double complex m00, double complex m01,
             double complex m10, double complex m11):
    cdef double complex[::1] s = state
    cdef Py_ssize_t N = s.shape[0], step = 1 << q, blk, i, j
    cdef double complex a0, a1
    with nogil:
        for blk in range(N // (2 * step)):
            i = blk * 2 * step
            for j in range(i, i + step):
                a0 = s[j]
                a1 = s[j + step]
                s[j] = m00 * a0 + m01 * a1
                s[j + step] = m10 * a0 + m11 * a1


def apply_diag(cnp.ndarray state, int q, double complex d0, double complex d1):
    cdef double complex[::1] s = state
    cdef Py_ssize_t N = s.shape[0], step = 1 << q, blk, i, j
    with nogil:
        for blk in range(N // (2 * step)):
            i = blk * 2 * step
            for j in range(i, i + step):
                s[j] = d0 * s[j]
                s[j + step] = d1 * s[j + step]


def apply_cx(cnp.ndarray state, int c, int t):
    cdef double complex[::1] s = state
    cdef Py_ssize_t N = s.shape[0], cm = 1 << c, tm = 1 << t, i
    cdef double complex tmp
    with nogil:
        for i in range(N):
            if (i & cm) and not (i & tm):
                tmp = s[i]
                s[i] = s[i | tm]
                s[i | tm] = tmp


def apply_cphase(cnp.ndarray state, int a, int b, double complex phase):
    cdef double complex[::1] s = state
    cdef Py_ssize_t N = s.shape[0], mask = (1 << a) | (1 << b), i
    with nogil:
        for i in range(N):
            if (i & mask) == mask:
                s[i] = phase * s[i]


def apply_swap(cnp.ndarray state, int a, int b):
    cdef double complex[::1] s = state
    cdef Py_ssize_t N = s.shape[0], am = 1 << a, bm = 1 << b, i
    cdef double complex tmp
    with nogil:
        for i in range(N):
            if (i & am) and not (i & bm):
                tmp = s[i]
                s[i] = s[(i ^ am) | bm]
                s[(i ^ am) | bm] = tmp
