"""Intra-method control-flow graphs and dominance/post-dominance queries.

Structured statements are lowered to edges over per-statement nodes; every
expression maps (via ``Cfg.node_of``) to the node that evaluates it.
``try``/``finally`` is normalized so that every exit path of the protected
block — normal completion or an early return/throw — passes through the
finally block. The finally region is shared, not duplicated, which
over-approximates paths but keeps dominance sound for lock-scope queries.

Dominators use the standard iterative fixpoint over reverse postorder; method
graphs are small, so the near-linear algorithm is unnecessary.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, Iterable, Optional

from threadlint.errors import UnreachableNodeError
from threadlint.frontend import ast as A


@dataclass(eq=False)
class CfgNode:
    index: int
    kind: str  # entry | exit | stmt | cond | loop | sync_enter | sync_exit | update
    ast: Optional[object] = None

    def __repr__(self):
        return f"<cfg {self.index}:{self.kind}>"


@dataclass(eq=False)
class Cfg:
    method: Optional[A.MethodDecl]
    nodes: list[CfgNode]
    succs: dict[CfgNode, list[CfgNode]]
    preds: dict[CfgNode, list[CfgNode]]
    entry: CfgNode
    exit: CfgNode
    node_of: dict[int, CfgNode]  # id(ast node) -> cfg node

    def node_for(self, ast_node) -> Optional[CfgNode]:
        return self.node_of.get(id(ast_node))


class _Builder:
    def __init__(self, method: Optional[A.MethodDecl]):
        self.method = method
        self.nodes: list[CfgNode] = []
        self.succs: dict[CfgNode, list[CfgNode]] = {}
        self.preds: dict[CfgNode, list[CfgNode]] = {}
        self.node_of: dict[int, CfgNode] = {}
        # exit_carriers[-1] collects nodes whose control continues at the
        # innermost enclosing finally block (or the method exit at level 0)
        self.exit_carriers: list[list[CfgNode]] = [[]]
        self.entry = self.new_node("entry")

    def new_node(self, kind: str, ast_node=None) -> CfgNode:
        n = CfgNode(len(self.nodes), kind, ast_node)
        self.nodes.append(n)
        self.succs[n] = []
        self.preds[n] = []
        return n

    def edge(self, a: CfgNode, b: CfgNode) -> None:
        if b not in self.succs[a]:
            self.succs[a].append(b)
            self.preds[b].append(a)

    def connect(self, preds: Iterable[CfgNode], node: CfgNode) -> None:
        for p in preds:
            self.edge(p, node)

    def map_tree(self, expr, node: CfgNode) -> None:
        """Associate an expression and all its descendants with a cfg node."""
        if expr is None:
            return
        self.node_of[id(expr)] = node
        for child in _expr_children(expr):
            self.map_tree(child, node)

    # -- lowering --

    def lower_stmt(self, s: A.Stmt, preds: list[CfgNode]) -> list[CfgNode]:
        if isinstance(s, A.Block):
            self.node_of[id(s)] = preds[0] if preds else self.entry
            frontier = preds
            for inner in s.stmts:
                frontier = self.lower_stmt(inner, frontier)
            return frontier

        if isinstance(s, (A.LocalDecl, A.ExprStmt, A.Empty)):
            n = self.new_node("stmt", s)
            self.connect(preds, n)
            self.node_of[id(s)] = n
            if isinstance(s, A.LocalDecl):
                for d in s.declarators:
                    self.map_tree(d.init, n)
            elif isinstance(s, A.ExprStmt):
                self.map_tree(s.expr, n)
            return [n]

        if isinstance(s, A.If):
            cond = self.new_node("cond", s)
            self.connect(preds, cond)
            self.node_of[id(s)] = cond
            self.map_tree(s.cond, cond)
            then_f = self.lower_stmt(s.then, [cond])
            if s.els is not None:
                else_f = self.lower_stmt(s.els, [cond])
            else:
                else_f = [cond]
            return then_f + else_f

        if isinstance(s, A.While):
            head = self.new_node("loop", s)
            self.connect(preds, head)
            self.node_of[id(s)] = head
            self.map_tree(s.cond, head)
            body_f = self.lower_stmt(s.body, [head])
            self.connect(body_f, head)  # back edge
            return [head]

        if isinstance(s, A.For):
            frontier = preds
            if s.init is not None:
                frontier = self.lower_stmt(s.init, frontier)
            head = self.new_node("loop", s)
            self.connect(frontier, head)
            self.node_of[id(s)] = head
            if s.cond is not None:
                self.map_tree(s.cond, head)
            body_f = self.lower_stmt(s.body, [head])
            if s.update:
                upd = self.new_node("update", s)
                self.connect(body_f, upd)
                for e in s.update:
                    self.map_tree(e, upd)
                self.edge(upd, head)
            else:
                self.connect(body_f, head)
            # `for (;;)` never exits normally
            return [head] if s.cond is not None else []

        if isinstance(s, A.ForEach):
            head = self.new_node("loop", s)
            self.connect(preds, head)
            self.node_of[id(s)] = head
            self.map_tree(s.iterable, head)
            body_f = self.lower_stmt(s.body, [head])
            self.connect(body_f, head)
            return [head]

        if isinstance(s, (A.Return, A.Throw)):
            n = self.new_node("stmt", s)
            self.connect(preds, n)
            self.node_of[id(s)] = n
            self.map_tree(s.value, n)
            self.exit_carriers[-1].append(n)
            return []

        if isinstance(s, A.Sync):
            enter = self.new_node("sync_enter", s)
            self.connect(preds, enter)
            self.node_of[id(s)] = enter
            self.map_tree(s.monitor, enter)
            body_f = self.lower_stmt(s.body, [enter])
            leave = self.new_node("sync_exit", s)
            self.connect(body_f, leave)
            return [leave]

        if isinstance(s, A.Try):
            has_finally = s.finally_block is not None
            if has_finally:
                self.exit_carriers.append([])
            body_f = self.lower_stmt(s.body, preds)
            frontiers = list(body_f)
            for c in s.catches:
                # conservative: the handler is reachable once the protected
                # block completes (exceptional edges mid-block are not modeled)
                frontiers += self.lower_stmt(c.body, list(body_f))
            if not has_finally:
                return frontiers
            carried = self.exit_carriers.pop()
            fin_preds = frontiers + carried
            if not fin_preds:
                return []
            fin_f = self.lower_stmt(s.finally_block, fin_preds)
            if carried:
                # early exits continue past the finally toward the next
                # enclosing finally or the method exit
                self.exit_carriers[-1].extend(fin_f)
            return fin_f if frontiers else []

        raise TypeError(f"unhandled statement {type(s).__name__}")

    def finish(self, frontier: list[CfgNode]) -> Cfg:
        exit_node = self.new_node("exit")
        self.connect(frontier, exit_node)
        self.connect(self.exit_carriers[0], exit_node)
        if not self.preds[exit_node] and not frontier:
            # every path loops forever; keep the invariant that exit exists
            pass
        return Cfg(self.method, self.nodes, self.succs, self.preds,
                   self.entry, exit_node, self.node_of)


def _expr_children(e) -> list:
    if isinstance(e, A.FieldSel):
        return [e.qualifier]
    if isinstance(e, A.Call):
        return ([e.qualifier] if e.qualifier is not None else []) + list(e.args)
    if isinstance(e, A.New):
        return list(e.args or []) + list(e.dims or [])
    if isinstance(e, A.Index):
        return [e.base, e.index]
    if isinstance(e, A.Unary):
        return [e.operand]
    if isinstance(e, A.Binary):
        return [e.left, e.right]
    if isinstance(e, A.Assign):
        return [e.target, e.value]
    if isinstance(e, A.Paren):
        return [e.inner]
    return []


def build_cfg(m: A.MethodDecl) -> Cfg:
    """Lower one callable body to a control-flow graph with unique entry/exit."""
    b = _Builder(m)
    frontier = [b.entry]
    if m.body is not None:
        for s in m.body.stmts:
            frontier = b.lower_stmt(s, frontier)
    return b.finish(frontier)


# --- dominance --------------------------------------------------------------


@dataclass(eq=False)
class DomInfo:
    """Immediate-dominator and immediate-post-dominator trees."""

    idom: dict[Hashable, Hashable]
    ipdom: dict[Hashable, Hashable]
    entry: Hashable
    exit: Hashable
    _dom_index: dict[Hashable, int] = field(default_factory=dict)
    _pdom_index: dict[Hashable, int] = field(default_factory=dict)


def _reverse_postorder(entry, succs) -> list:
    seen = {entry}
    post: list = []
    stack: list[tuple] = [(entry, iter(succs.get(entry, ())))]
    while stack:
        node, it = stack[-1]
        advanced = False
        for nxt in it:
            if nxt not in seen:
                seen.add(nxt)
                stack.append((nxt, iter(succs.get(nxt, ()))))
                advanced = True
                break
        if not advanced:
            post.append(node)
            stack.pop()
    post.reverse()
    return post


def _idoms(entry, succs, preds) -> tuple[dict, dict]:
    order = _reverse_postorder(entry, succs)
    index = {n: i for i, n in enumerate(order)}
    idom: dict = {entry: entry}

    def intersect(a, b):
        while a != b:
            while index[a] > index[b]:
                a = idom[a]
            while index[b] > index[a]:
                b = idom[b]
        return a

    changed = True
    while changed:
        changed = False
        for b in order[1:]:
            new = None
            for p in preds.get(b, ()):
                if p in idom:
                    new = p if new is None else intersect(p, new)
            if new is not None and idom.get(b) != new:
                idom[b] = new
                changed = True
    return idom, index


def compute_dom_info(entry, exit_node, succs, preds) -> DomInfo:
    """Dominators from ``entry`` and post-dominators from ``exit_node``.

    Works on any digraph given successor/predecessor adjacency maps.
    """
    idom, dom_index = _idoms(entry, succs, preds)
    ipdom, pdom_index = _idoms(exit_node, preds, succs)
    return DomInfo(idom, ipdom, entry, exit_node, dom_index, pdom_index)


def dominance(cfg: Cfg) -> DomInfo:
    return compute_dom_info(cfg.entry, cfg.exit, cfg.succs, cfg.preds)


def _tree_query(tree: dict, index: dict, root, a, b, what: str) -> bool:
    for n in (a, b):
        if n != root and n not in tree:
            raise UnreachableNodeError(f"{what} undefined for {n!r}: not in the analyzed region")
    node = b
    while True:
        if node == a:
            return True
        parent = tree[node]
        if parent == node:
            return False
        node = parent


def dominates(d: DomInfo, a, b) -> bool:
    """True iff every path entry -> b passes through a (reflexive)."""
    return _tree_query(d.idom, d._dom_index, d.entry, a, b, "dominance")


def post_dominates(d: DomInfo, a, b) -> bool:
    """True iff every path b -> exit passes through a (reflexive)."""
    return _tree_query(d.ipdom, d._pdom_index, d.exit, a, b, "post-dominance")
