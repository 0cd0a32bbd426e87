# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled oracle kernels: the hot twin of ``_kernel_py``.

Same contract, same deterministic enumeration order, same results; the DFS
and the happens-before closure run over C arrays with uint64 bitsets.
"""

from libc.stdint cimport int64_t, uint64_t
from libc.stdlib cimport calloc, free, malloc
from libc.string cimport memset

BACKEND = "compiled"
MAX_ACTIONS = 64

OP_READ = 0
OP_WRITE = 1
OP_VREAD = 2
OP_VWRITE = 3
OP_LOCK = 4
OP_UNLOCK = 5
OP_DEFINIT = 6
OP_FININIT = 7
OP_LOCAL = 8

cdef enum:
    C_READ = 0
    C_WRITE = 1
    C_VREAD = 2
    C_VWRITE = 3
    C_LOCK = 4
    C_UNLOCK = 5
    C_DEFINIT = 6
    C_FININIT = 7
    C_LOCAL = 8


cdef inline bint _field_op(int op) nogil:
    return op == C_READ or op == C_WRITE or op == C_DEFINIT or op == C_FININIT


cdef inline bint _write_op(int op) nogil:
    return op == C_WRITE or op == C_DEFINIT or op == C_FININIT


cdef void _reach_c(int n, int* thread, int* opk, int* tgt, uint64_t* reach) nogil:
    """Happens-before closure rows over execution positions (forward DAG)."""
    cdef int i, j, t, maxt
    cdef uint64_t bits
    cdef int first_of[72]
    maxt = 0
    for i in range(n):
        if thread[i] > maxt:
            maxt = thread[i]
    for t in range(maxt + 1):
        first_of[t] = -1
    for i in range(n):
        if first_of[thread[i]] == -1:
            first_of[thread[i]] = i
    for i in range(n - 1, -1, -1):
        bits = 0
        # HB1: next action of the same thread
        for j in range(i + 1, n):
            if thread[j] == thread[i]:
                bits |= (<uint64_t>1 << j) | reach[j]
                break
        if opk[i] == C_UNLOCK:
            for j in range(i + 1, n):  # HB2
                if opk[j] == C_LOCK and tgt[j] == tgt[i]:
                    bits |= (<uint64_t>1 << j) | reach[j]
        elif opk[i] == C_VWRITE:
            for j in range(i + 1, n):  # HB3
                if opk[j] == C_VREAD and tgt[j] == tgt[i]:
                    bits |= (<uint64_t>1 << j) | reach[j]
        elif opk[i] == C_DEFINIT or opk[i] == C_FININIT:
            for t in range(maxt + 1):  # HB4 / HB5
                j = first_of[t]
                if j > i and t != thread[i]:
                    bits |= (<uint64_t>1 << j) | reach[j]
        reach[i] = bits


cdef bint _race_c(int n, int* thread, int* opk, int* tgt, uint64_t* reach) nogil:
    cdef int i, j
    cdef bint iw
    for i in range(n):
        if not _field_op(opk[i]):
            continue
        iw = _write_op(opk[i])
        for j in range(i + 1, n):
            if not _field_op(opk[j]) or thread[j] == thread[i] or tgt[j] != tgt[i]:
                continue
            if not iw and not _write_op(opk[j]):
                continue
            if not (reach[i] >> j) & 1:
                return True
    return False


def hb_direct(int n, thread, opk, tgt):
    """Direct HB edges as adjacency lists (python-object result)."""
    direct = [[] for _ in range(n)]
    last_of = {}
    first_of = {}
    cdef int i, j, t
    for i in range(n):
        t = thread[i]
        if t in last_of:
            direct[last_of[t]].append(i)
        else:
            first_of[t] = i
        last_of[t] = i
    for i in range(n):
        op = opk[i]
        if op == OP_UNLOCK:
            for j in range(i + 1, n):
                if opk[j] == OP_LOCK and tgt[j] == tgt[i]:
                    direct[i].append(j)
        elif op == OP_VWRITE:
            for j in range(i + 1, n):
                if opk[j] == OP_VREAD and tgt[j] == tgt[i]:
                    direct[i].append(j)
        elif op == OP_DEFINIT or op == OP_FININIT:
            for t, j in first_of.items():
                if t != thread[i] and j > i:
                    direct[i].append(j)
    return direct


cdef int _fill(int n, thread, opk, tgt, int* c_thread, int* c_opk, int* c_tgt) except -1:
    cdef int i
    if n > MAX_ACTIONS:
        raise ValueError(f"execution has {n} actions; kernel limit is {MAX_ACTIONS}")
    for i in range(n):
        c_thread[i] = thread[i]
        c_opk[i] = opk[i]
        c_tgt[i] = tgt[i]
    return 0


def hb_reach(int n, thread, opk, tgt):
    cdef int c_thread[64]
    cdef int c_opk[64]
    cdef int c_tgt[64]
    cdef uint64_t reach[64]
    _fill(n, thread, opk, tgt, c_thread, c_opk, c_tgt)
    _reach_c(n, c_thread, c_opk, c_tgt, reach)
    return [reach[i] for i in range(n)]


def race_pairs(int n, thread, opk, tgt, reach=None):
    cdef int c_thread[64]
    cdef int c_opk[64]
    cdef int c_tgt[64]
    cdef uint64_t c_reach[64]
    cdef int i, j
    _fill(n, thread, opk, tgt, c_thread, c_opk, c_tgt)
    if reach is None:
        _reach_c(n, c_thread, c_opk, c_tgt, c_reach)
    else:
        for i in range(n):
            c_reach[i] = reach[i]
    pairs = []
    for i in range(n):
        if not _field_op(c_opk[i]):
            continue
        for j in range(i + 1, n):
            if not _field_op(c_opk[j]) or c_thread[j] == c_thread[i] or c_tgt[j] != c_tgt[i]:
                continue
            if not _write_op(c_opk[i]) and not _write_op(c_opk[j]):
                continue
            if not (c_reach[i] >> j) & 1:
                pairs.append((i, j))
    return pairs


def interleavings(th_opk, th_tgt):
    """Generator twin of the pure kernel; deterministic ascending-thread order."""
    cdef int k = len(th_opk)
    lens = [len(x) for x in th_opk]
    cdef int total = 0
    for L in lens:
        total += L
    ptr = [0] * k
    held = {}
    seq = []

    def rec():
        cdef int t, i
        if len(seq) == total:
            yield tuple(seq)
            return
        progressed = False
        for t in range(k):
            i = ptr[t]
            if i >= lens[t]:
                continue
            op = th_opk[t][i]
            g = th_tgt[t][i]
            if op == OP_LOCK:
                h = held.get(g)
                if h is not None and h[0] != t:
                    continue
                if h is None:
                    held[g] = [t, 1]
                else:
                    h[1] += 1
            elif op == OP_UNLOCK:
                h = held[g]
                h[1] -= 1
                if h[1] == 0:
                    del held[g]
            progressed = True
            ptr[t] = i + 1
            seq.append(t)
            yield from rec()
            seq.pop()
            ptr[t] = i
            if op == OP_LOCK:
                h = held[g]
                h[1] -= 1
                if h[1] == 0:
                    del held[g]
            elif op == OP_UNLOCK:
                h = held.get(g)
                if h is None:
                    held[g] = [t, 1]
                else:
                    h[1] += 1
        if not progressed:
            yield tuple(seq)

    yield from rec()


cdef void _explore_dfs(
    int depth, int total, int k, int pi,
    int* lens, int* offs, int* w_opk, int* w_tgt,
    int* ptr, int* held_by, int* held_depth,
    int* f_thread, int* f_opk, int* f_tgt,
    int* path,
    int64_t* n_exec, int64_t* n_racy,
    int* wit, int* wit_len, bint* have_wit,
    uint64_t* reach_buf,
) nogil:
    cdef int t, i, op, g, n
    cdef bint progressed = False
    if depth == total:
        n = pi + depth
        _reach_c(n, f_thread, f_opk, f_tgt, reach_buf)
        n_exec[0] += 1
        if _race_c(n, f_thread, f_opk, f_tgt, reach_buf):
            n_racy[0] += 1
            if not have_wit[0]:
                for i in range(depth):
                    wit[i] = path[i]
                wit_len[0] = depth
                have_wit[0] = True
        return
    for t in range(k):
        i = ptr[t]
        if i >= lens[t]:
            continue
        op = w_opk[offs[t] + i]
        g = w_tgt[offs[t] + i]
        if op == C_LOCK:
            if held_by[g] != -1 and held_by[g] != t:
                continue
            held_by[g] = t
            held_depth[g] += 1
        elif op == C_UNLOCK:
            held_depth[g] -= 1
            if held_depth[g] == 0:
                held_by[g] = -1
        progressed = True
        ptr[t] = i + 1
        f_thread[pi + depth] = 1 + t
        f_opk[pi + depth] = op
        f_tgt[pi + depth] = g
        path[depth] = t
        _explore_dfs(depth + 1, total, k, pi, lens, offs, w_opk, w_tgt,
                     ptr, held_by, held_depth, f_thread, f_opk, f_tgt, path,
                     n_exec, n_racy, wit, wit_len, have_wit, reach_buf)
        ptr[t] = i
        if op == C_LOCK:
            held_depth[g] -= 1
            if held_depth[g] == 0:
                held_by[g] = -1
        elif op == C_UNLOCK:
            held_by[g] = t
            held_depth[g] += 1
    if not progressed:
        # deadlock: maximal but incomplete execution
        n = pi + depth
        _reach_c(n, f_thread, f_opk, f_tgt, reach_buf)
        n_exec[0] += 1
        if _race_c(n, f_thread, f_opk, f_tgt, reach_buf):
            n_racy[0] += 1
            if not have_wit[0]:
                for i in range(depth):
                    wit[i] = path[i]
                wit_len[0] = depth
                have_wit[0] = True


def explore(init_opk, init_tgt, th_opk, th_tgt):
    """(executions, racy executions, first racy schedule or None)."""
    cdef int k = len(th_opk)
    cdef int pi = len(init_opk)
    cdef int total = 0
    cdef int i, t, n_full, max_tgt
    for t in range(k):
        total += len(th_opk[t])
    n_full = pi + total
    if n_full > MAX_ACTIONS:
        raise ValueError(f"program has {n_full} actions; kernel limit is {MAX_ACTIONS}")

    cdef int f_thread[64]
    cdef int f_opk[64]
    cdef int f_tgt[64]
    cdef int path[64]
    cdef int wit[64]
    cdef int lens[64]
    cdef int offs[64]
    cdef int ptr[64]
    cdef int w_opk[64]
    cdef int w_tgt[64]
    cdef uint64_t reach_buf[64]
    if k > 63:
        raise ValueError("too many threads")

    for i in range(pi):
        f_thread[i] = 0
        f_opk[i] = init_opk[i]
        f_tgt[i] = init_tgt[i]

    max_tgt = 0
    cdef int pos = 0
    for t in range(k):
        lens[t] = len(th_opk[t])
        offs[t] = pos
        ptr[t] = 0
        for i in range(lens[t]):
            w_opk[pos] = th_opk[t][i]
            w_tgt[pos] = th_tgt[t][i]
            if w_tgt[pos] > max_tgt:
                max_tgt = w_tgt[pos]
            pos += 1
    for i in range(pi):
        if f_tgt[i] > max_tgt:
            max_tgt = f_tgt[i]

    cdef int* held_by = <int*>malloc((max_tgt + 2) * sizeof(int))
    cdef int* held_depth = <int*>calloc(max_tgt + 2, sizeof(int))
    if held_by == NULL or held_depth == NULL:
        if held_by != NULL:
            free(held_by)
        if held_depth != NULL:
            free(held_depth)
        raise MemoryError()
    for i in range(max_tgt + 2):
        held_by[i] = -1

    cdef int64_t n_exec = 0
    cdef int64_t n_racy = 0
    cdef int wit_len = 0
    cdef bint have_wit = False
    try:
        with nogil:
            _explore_dfs(0, total, k, pi, lens, offs, w_opk, w_tgt,
                         ptr, held_by, held_depth, f_thread, f_opk, f_tgt, path,
                         &n_exec, &n_racy, wit, &wit_len, &have_wit, reach_buf)
    finally:
        free(held_by)
        free(held_depth)
    witness = tuple(wit[i] for i in range(wit_len)) if have_wit else None
    return n_exec, n_racy, witness
