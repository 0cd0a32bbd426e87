"""Pure-Python oracle kernels: interleaving enumeration, happens-before
closure, and race detection over encoded action arrays.

This module is the fallback twin of the compiled ``_speedups`` extension;
both implement the identical contract and are compared bit-for-bit by the
parity tests and the benchmark.

Encoding: each action is (op, target) with op one of the OP_* codes below
and target a small nonnegative int naming a field or monitor (-1 when
absent). Positions in an execution are bitset bits, so executions are capped
at 64 actions.
"""

from __future__ import annotations

from typing import Iterator, Optional

BACKEND = "pure"
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

_FIELD_OPS = (OP_READ, OP_WRITE, OP_DEFINIT, OP_FININIT)
_WRITE_OPS = (OP_WRITE, OP_DEFINIT, OP_FININIT)


def hb_direct(n: int, thread: list[int], opk: list[int], tgt: list[int]) -> list[list[int]]:
    """Direct happens-before edges (program order, monitor, volatile, init)."""
    direct: list[list[int]] = [[] for _ in range(n)]
    last_of: dict[int, int] = {}
    first_of: dict[int, int] = {}
    for i in range(n):
        t = thread[i]
        if t in last_of:
            direct[last_of[t]].append(i)  # HB1
        else:
            first_of[t] = i
        last_of[t] = i
    for i in range(n):
        op = opk[i]
        if op == OP_UNLOCK:
            for j in range(i + 1, n):  # HB2
                if opk[j] == OP_LOCK and tgt[j] == tgt[i]:
                    direct[i].append(j)
        elif op == OP_VWRITE:
            for j in range(i + 1, n):  # HB3
                if opk[j] == OP_VREAD and tgt[j] == tgt[i]:
                    direct[i].append(j)
        elif op == OP_DEFINIT or op == OP_FININIT:
            for t, j in first_of.items():  # HB4 / HB5
                if t != thread[i] and j > i:
                    direct[i].append(j)
    return direct


def hb_reach(n: int, thread: list[int], opk: list[int], tgt: list[int]) -> list[int]:
    """Row bitmasks of the transitive closure: bit j of row i means i -> j."""
    if n > MAX_ACTIONS:
        raise ValueError(f"execution has {n} actions; kernel limit is {MAX_ACTIONS}")
    direct = hb_direct(n, thread, opk, tgt)
    reach = [0] * n
    for i in range(n - 1, -1, -1):
        bits = 0
        for j in direct[i]:
            bits |= (1 << j) | reach[j]
        reach[i] = bits
    return reach


def race_pairs(
    n: int,
    thread: list[int],
    opk: list[int],
    tgt: list[int],
    reach: Optional[list[int]] = None,
) -> list[tuple[int, int]]:
    """All position pairs (i, j), i < j, conflicting and unordered."""
    if reach is None:
        reach = hb_reach(n, thread, opk, tgt)
    pairs = []
    for i in range(n):
        if opk[i] not in _FIELD_OPS:
            continue
        ri = reach[i]
        for j in range(i + 1, n):
            if opk[j] not in _FIELD_OPS or thread[j] == thread[i] or tgt[j] != tgt[i]:
                continue
            if opk[i] not in _WRITE_OPS and opk[j] not in _WRITE_OPS:
                continue
            if not (ri >> j) & 1:
                pairs.append((i, j))
    return pairs


def _has_race(n, thread, opk, tgt, reach) -> bool:
    for i in range(n):
        if opk[i] not in _FIELD_OPS:
            continue
        ri = reach[i]
        i_writes = opk[i] in _WRITE_OPS
        for j in range(i + 1, n):
            if opk[j] not in _FIELD_OPS or thread[j] == thread[i] or tgt[j] != tgt[i]:
                continue
            if not i_writes and opk[j] not in _WRITE_OPS:
                continue
            if not (ri >> j) & 1:
                return True
    return False


def interleavings(th_opk: list[list[int]], th_tgt: list[list[int]]) -> Iterator[tuple[int, ...]]:
    """Yield every maximal mutex-respecting interleaving of the worker threads.

    Each result is the sequence of thread indices taking a step; threads are
    tried in ascending index order, so the stream is deterministic. A result
    shorter than the total action count is a stuck (deadlocked) execution.
    Programs must be pre-validated: unlock is assumed to release a monitor
    the thread holds.
    """
    k = len(th_opk)
    lens = [len(x) for x in th_opk]
    total = sum(lens)
    ptr = [0] * k
    held: dict[int, list[int]] = {}  # monitor -> [owner thread, depth]
    seq: list[int] = []

    def rec() -> Iterator[tuple[int, ...]]:
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
                    continue  # blocked
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
            yield tuple(seq)  # deadlock: maximal but incomplete

    yield from rec()


def explore(
    init_opk: list[int],
    init_tgt: list[int],
    th_opk: list[list[int]],
    th_tgt: list[list[int]],
) -> tuple[int, int, Optional[tuple[int, ...]]]:
    """Enumerate all executions; count them and the racy ones.

    Returns (executions, racy executions, first racy schedule or None). The
    init actions run as a fixed main-thread (thread 0) prefix; worker t
    becomes thread 1+t in the combined execution.
    """
    pi = len(init_opk)
    n_exec = 0
    n_racy = 0
    witness: Optional[tuple[int, ...]] = None
    for seq in interleavings(th_opk, th_tgt):
        n = pi + len(seq)
        thread = [0] * pi + [0] * len(seq)
        opk = list(init_opk) + [0] * len(seq)
        tgt = list(init_tgt) + [0] * len(seq)
        ptr = [0] * len(th_opk)
        for idx, t in enumerate(seq):
            i = ptr[t]
            ptr[t] = i + 1
            thread[pi + idx] = 1 + t
            opk[pi + idx] = th_opk[t][i]
            tgt[pi + idx] = th_tgt[t][i]
        reach = hb_reach(n, thread, opk, tgt)
        n_exec += 1
        if _has_race(n, thread, opk, tgt, reach):
            n_racy += 1
            if witness is None:
                witness = seq
    return n_exec, n_racy, witness
