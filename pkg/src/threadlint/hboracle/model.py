"""Execution model for the happens-before oracle.

Actions, thread programs, well-formed executions, the happens-before closure
(program order, monitor order, volatile order, initialization order, and
transitivity), and structural data-race detection. Value semantics are
ignored: a race is a property of action identity and ordering alone.

``local`` actions model operations that touch neither fields nor monitors
(e.g. arithmetic on method locals); they occupy interleaving slots but never
participate in races.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator, Optional

from threadlint.errors import BudgetExceeded, MalformedExecution
from threadlint.hboracle._backend import kernel

DEFAULT_ACTION_BUDGET = 16


class Op(Enum):
    READ = "read"
    WRITE = "write"
    VOLATILE_READ = "volatile-read"
    VOLATILE_WRITE = "volatile-write"
    LOCK = "lock"
    UNLOCK = "unlock"
    DEFAULT_INIT = "default-init"
    FINAL_INIT = "final-init"
    LOCAL = "local"


OP_CODE = {
    Op.READ: kernel.OP_READ,
    Op.WRITE: kernel.OP_WRITE,
    Op.VOLATILE_READ: kernel.OP_VREAD,
    Op.VOLATILE_WRITE: kernel.OP_VWRITE,
    Op.LOCK: kernel.OP_LOCK,
    Op.UNLOCK: kernel.OP_UNLOCK,
    Op.DEFAULT_INIT: kernel.OP_DEFINIT,
    Op.FINAL_INIT: kernel.OP_FININIT,
    Op.LOCAL: kernel.OP_LOCAL,
}

FIELD_OPS = frozenset({Op.READ, Op.WRITE, Op.DEFAULT_INIT, Op.FINAL_INIT})
WRITE_OPS = frozenset({Op.WRITE, Op.DEFAULT_INIT, Op.FINAL_INIT})
SYNC_OPS = frozenset({Op.LOCK, Op.UNLOCK, Op.VOLATILE_READ, Op.VOLATILE_WRITE})


@dataclass(frozen=True)
class TraceAction:
    """One operation executed by one thread; ``seq`` is its program-order index."""

    thread: int
    op: Op
    target: Optional[str]  # field or monitor name; None only for LOCAL
    seq: int
    label: str = ""

    def __post_init__(self):
        if self.op is not Op.LOCAL and not self.target:
            raise ValueError(f"{self.op.value} action requires a target")

    def __str__(self):
        tgt = f"({self.target})" if self.target else ""
        return f"t{self.thread}:{self.op.value}{tgt}@{self.seq}"


def _check_nesting(actions: tuple[TraceAction, ...], thread: int) -> None:
    depth: dict[str, int] = {}
    for a in actions:
        if a.op is Op.LOCK:
            depth[a.target] = depth.get(a.target, 0) + 1
        elif a.op is Op.UNLOCK:
            if depth.get(a.target, 0) <= 0:
                raise MalformedExecution(
                    f"thread {thread} unlocks {a.target!r} without holding it"
                )
            depth[a.target] -= 1
    # monitors may stay held at thread end (explicit Lock API allows it)


@dataclass(frozen=True)
class ThreadProgram:
    """Per-thread action lists plus a main thread running init actions first."""

    init_actions: tuple[TraceAction, ...]
    threads: tuple[tuple[TraceAction, ...], ...]
    name: str = ""

    def __post_init__(self):
        for a in self.init_actions:
            if a.thread != 0:
                raise MalformedExecution("init actions must run on the main thread (0)")
        for t, actions in enumerate(self.threads, start=1):
            for a in actions:
                if a.thread != t:
                    raise MalformedExecution(f"action {a} listed under thread {t}")
            if any(x.seq >= y.seq for x, y in zip(actions, actions[1:])):
                raise MalformedExecution(f"thread {t} action seq not strictly increasing")
            _check_nesting(actions, t)
        _check_nesting(self.init_actions, 0)

    @classmethod
    def build(
        cls,
        threads: list[list[tuple[Op, Optional[str]]]],
        init: Optional[list[tuple[Op, Optional[str]]]] = None,
        name: str = "",
    ) -> "ThreadProgram":
        """Construct from (op, target) pairs; seq numbers are assigned."""
        init_actions = tuple(
            TraceAction(0, op, tgt, i) for i, (op, tgt) in enumerate(init or [])
        )
        built = tuple(
            tuple(TraceAction(t, op, tgt, i) for i, (op, tgt) in enumerate(spec))
            for t, spec in enumerate(threads, start=1)
        )
        return cls(init_actions, built, name)

    def action_count(self) -> int:
        return len(self.init_actions) + sum(len(t) for t in self.threads)

    def worker_action_count(self) -> int:
        return sum(len(t) for t in self.threads)


@dataclass(frozen=True)
class Execution:
    """A total interleaving of a program's actions."""

    actions: tuple[TraceAction, ...]

    def validate(self) -> None:
        """Raise MalformedExecution on program-order or mutual-exclusion violations."""
        last_seq: dict[int, int] = {}
        held: dict[str, list[int]] = {}  # monitor -> [owner, depth]
        for a in self.actions:
            prev = last_seq.get(a.thread)
            if prev is not None and a.seq <= prev:
                raise MalformedExecution(
                    f"thread {a.thread} runs seq {a.seq} after {prev}: program order violated"
                )
            last_seq[a.thread] = a.seq
            if a.op is Op.LOCK:
                h = held.get(a.target)
                if h is None:
                    held[a.target] = [a.thread, 1]
                elif h[0] != a.thread:
                    raise MalformedExecution(
                        f"thread {a.thread} locks {a.target!r} while thread {h[0]} holds it"
                    )
                else:
                    h[1] += 1
            elif a.op is Op.UNLOCK:
                h = held.get(a.target)
                if h is None or h[0] != a.thread:
                    raise MalformedExecution(
                        f"thread {a.thread} unlocks {a.target!r} without holding it"
                    )
                h[1] -= 1
                if h[1] == 0:
                    del held[a.target]

    def encode(self) -> tuple[int, list[int], list[int], list[int], dict[str, int]]:
        n = len(self.actions)
        ids: dict[str, int] = {}
        thread = [a.thread for a in self.actions]
        opk = [OP_CODE[a.op] for a in self.actions]
        tgt = []
        for a in self.actions:
            if a.target is None:
                tgt.append(-1)
            else:
                tgt.append(ids.setdefault(a.target, len(ids)))
        return n, thread, opk, tgt, ids


_EDGE_PO = "po"
_EDGE_SYN = "syn"
_EDGE_INI = "ini"


class HbGraph:
    """Happens-before relation of one execution.

    ``base`` holds the direct edges with their classification (po for program
    order, syn for monitor/volatile edges, ini for initialization edges);
    ``ordered`` answers queries on the transitive closure.
    """

    def __init__(self, execution: Execution, base: dict[tuple[int, int], str], reach: list[int]):
        self.execution = execution
        self.base = base
        self._reach = reach
        self._index = {(a.thread, a.seq): i for i, a in enumerate(execution.actions)}

    def index_of(self, a: TraceAction) -> int:
        return self._index[(a.thread, a.seq)]

    def ordered_idx(self, i: int, j: int) -> bool:
        return bool((self._reach[i] >> j) & 1)

    def ordered(self, a: TraceAction, b: TraceAction) -> bool:
        return self.ordered_idx(self.index_of(a), self.index_of(b))

    def pairs(self) -> set[tuple[TraceAction, TraceAction]]:
        """The full closed relation as action pairs."""
        acts = self.execution.actions
        out = set()
        for i, row in enumerate(self._reach):
            bits = row
            while bits:
                j = (bits & -bits).bit_length() - 1
                bits &= bits - 1
                out.add((acts[i], acts[j]))
        return out

    def edge_kind(self, a: TraceAction, b: TraceAction) -> Optional[str]:
        return self.base.get((self.index_of(a), self.index_of(b)))


def hb_closure(e: Execution) -> HbGraph:
    """Happens-before closure of a well-formed execution (HB1-HB6)."""
    e.validate()
    n, thread, opk, tgt, _ = e.encode()
    direct = kernel.hb_direct(n, thread, opk, tgt)
    reach = kernel.hb_reach(n, thread, opk, tgt)
    base: dict[tuple[int, int], str] = {}
    for i, targets in enumerate(direct):
        for j in targets:
            if thread[i] == thread[j]:
                kind = _EDGE_PO
            elif e.actions[i].op in (Op.DEFAULT_INIT, Op.FINAL_INIT):
                kind = _EDGE_INI
            else:
                kind = _EDGE_SYN
            base[(i, j)] = kind
    return HbGraph(e, base, reach)


def detect_races(e: Execution) -> set[tuple[TraceAction, TraceAction]]:
    """Unordered conflicting pairs (both orientations, per race symmetry)."""
    e.validate()
    n, thread, opk, tgt, _ = e.encode()
    reach = kernel.hb_reach(n, thread, opk, tgt)
    pairs = kernel.race_pairs(n, thread, opk, tgt, reach)
    out = set()
    for i, j in pairs:
        a, b = e.actions[i], e.actions[j]
        out.add((a, b))
        out.add((b, a))
    return out


def _encode_program(p: ThreadProgram):
    ids: dict[str, int] = {}

    def code(a: TraceAction) -> int:
        if a.target is None:
            return -1
        return ids.setdefault(a.target, len(ids))

    init_opk = [OP_CODE[a.op] for a in p.init_actions]
    init_tgt = [code(a) for a in p.init_actions]
    th_opk = [[OP_CODE[a.op] for a in t] for t in p.threads]
    th_tgt = [[code(a) for a in t] for t in p.threads]
    return init_opk, init_tgt, th_opk, th_tgt


def _guard_budget(p: ThreadProgram, bound, action_budget: int) -> None:
    if bound is None and p.action_count() > action_budget:
        raise BudgetExceeded(
            f"program has {p.action_count()} actions (> {action_budget}); "
            "pass an explicit bound to enumerate anyway"
        )


def enumerate_executions(
    p: ThreadProgram,
    bound: Optional[int] = None,
    action_budget: int = DEFAULT_ACTION_BUDGET,
) -> Iterator[Execution]:
    """Every maximal interleaving satisfying program order and mutual exclusion.

    Deterministic order (threads tried in ascending id at each step). Without
    an explicit ``bound`` on the number of executions, programs over the
    action budget raise BudgetExceeded before enumeration starts.
    """
    _guard_budget(p, bound, action_budget)
    _, _, th_opk, th_tgt = _encode_program(p)
    prefix = p.init_actions
    count = 0
    for seq in kernel.interleavings(th_opk, th_tgt):
        ptrs = [0] * len(p.threads)
        tail = []
        for t in seq:
            tail.append(p.threads[t][ptrs[t]])
            ptrs[t] += 1
        yield Execution(prefix + tuple(tail))
        count += 1
        if bound is not None and count >= bound:
            return


def count_executions(p: ThreadProgram, action_budget: int = DEFAULT_ACTION_BUDGET) -> int:
    _guard_budget(p, None, action_budget)
    _, _, th_opk, th_tgt = _encode_program(p)
    return sum(1 for _ in kernel.interleavings(th_opk, th_tgt))


@dataclass(frozen=True)
class RaceReport:
    raced: bool
    witness: Optional[Execution]
    executions: int
    racy_executions: int
    program: ThreadProgram = field(repr=False, default=None)


def program_races(p: ThreadProgram, action_budget: int = DEFAULT_ACTION_BUDGET) -> RaceReport:
    """Exhaustively check every execution of the program for data races."""
    _guard_budget(p, None, action_budget)
    init_opk, init_tgt, th_opk, th_tgt = _encode_program(p)
    n_exec, n_racy, witness_seq = kernel.explore(init_opk, init_tgt, th_opk, th_tgt)
    witness = None
    if witness_seq is not None:
        ptrs = [0] * len(p.threads)
        tail = []
        for t in witness_seq:
            tail.append(p.threads[t][ptrs[t]])
            ptrs[t] += 1
        witness = Execution(p.init_actions + tuple(tail))
    return RaceReport(n_racy > 0, witness, n_exec, n_racy, p)


def substitute_volatile(p: ThreadProgram, field_name: str) -> ThreadProgram:
    """Replace plain reads/writes of one field with volatile variants.

    Initialization writes keep their kind: a volatile field still receives a
    default-value write during object initialization.
    """

    def sub(a: TraceAction) -> TraceAction:
        if a.target != field_name:
            return a
        if a.op is Op.READ:
            return TraceAction(a.thread, Op.VOLATILE_READ, a.target, a.seq, a.label)
        if a.op is Op.WRITE:
            return TraceAction(a.thread, Op.VOLATILE_WRITE, a.target, a.seq, a.label)
        return a

    return ThreadProgram(
        tuple(sub(a) for a in p.init_actions),
        tuple(tuple(sub(a) for a in t) for t in p.threads),
        p.name,
    )
