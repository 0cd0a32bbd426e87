"""Monitor identification and protection of field accesses.

An access is protected by an explicit lock field when some lock()/unlock()
call pair on that field satisfies the dominance conditions: the lock call
dominates both the unlock call and the access, and the unlock call
post-dominates the access. Protection by the synchronized keyword (methods,
static methods, blocks) is recognized syntactically.

Monitor equality is syntactic-canonical: ``l`` and ``this.l`` share one
identity; ``synchronized (this)`` and a synchronized instance method share
the ``this`` monitor. A dominating ``tryLock()`` counts as protection even
though its acquisition may fail; read-write and stamped locks are not
recognized unless configured.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional

from threadlint.accesspaths import AccessPathFact, _walk_exprs, provides_access
from threadlint.cfg import Cfg, CfgNode, DomInfo, build_cfg, dominance, dominates, post_dominates
from threadlint.classmodel import ClassModel, FieldAccess
from threadlint.errors import UnreachableNodeError
from threadlint.frontend import ast as A
from threadlint.frontend.printer import canonical_text

DEFAULT_LOCK_TYPES = ("Lock", "ReentrantLock")
DEFAULT_LOCK_METHODS = ("lock", "lockInterruptibly", "tryLock")
DEFAULT_UNLOCK_METHODS = ("unlock",)


class MonitorKind(Enum):
    LOCK_FIELD = "lockField"
    THIS = "thisMonitor"
    CLASS = "classMonitor"
    SYNC_EXPR = "syncExpr"


@dataclass(frozen=True)
class Monitor:
    kind: MonitorKind
    identity: str

    def __str__(self):
        return self.identity


@dataclass(frozen=True)
class LockWindow:
    """A lock()/unlock() pair where the lock call dominates the unlock call."""

    lock_node: CfgNode
    unlock_node: CfgNode
    field: A.FieldDecl


def is_lock_type(type_name: str, lock_types: tuple[str, ...] = DEFAULT_LOCK_TYPES) -> bool:
    """True when the simple or qualified form names a recognized lock type."""
    base = type_name.split("<", 1)[0]
    if base.endswith("[]"):
        return False
    simple = base.rsplit(".", 1)[-1]
    return simple in lock_types or base in lock_types


def _strip_paren(e: A.Expr) -> A.Expr:
    while isinstance(e, A.Paren):
        e = e.inner
    return e


def _local_write_sources(m: A.MethodDecl, name: str) -> Optional[list[A.Expr]]:
    """RHS expressions of every write to local ``name``; None when it is a parameter."""
    if any(p.name == name for p in m.params):
        return None
    sources: list[A.Expr] = []
    if m.body is None:
        return sources
    stack: list[object] = [m.body]
    while stack:
        node = stack.pop()
        if isinstance(node, A.LocalDecl):
            for d in node.declarators:
                if d.name == name and d.init is not None:
                    sources.append(d.init)
                if d.init is not None:
                    stack.append(d.init)
            continue
        if isinstance(node, A.Assign):
            t = _strip_paren(node.target)
            if isinstance(t, A.Name) and t.identifier == name:
                sources.append(node.value)
            stack.append(node.value)
            continue
        from threadlint.accesspaths import _children

        stack.extend(c for c in _children(node) if c is not None)
    return sources


def _is_field_read(e: A.Expr, field: A.FieldDecl, decl: A.ClassDecl) -> bool:
    e = _strip_paren(e)
    if isinstance(e, A.Name) and e.identifier == field.name:
        return True
    if isinstance(e, A.FieldSel) and e.name == field.name:
        q = e.qualifier
        if isinstance(q, A.This):
            return True
        if isinstance(q, A.Name) and q.identifier == decl.name and field.is_static:
            return True
    return False


def represents(cm: ClassModel, lock_field: A.FieldDecl, var_expr: A.Expr, method: A.MethodDecl) -> bool:
    """Does ``var_expr`` (a lock-call receiver) denote ``lock_field``?

    True for the field itself, or for a local assigned exactly once, directly
    from a read of the field, and never reassigned.
    """
    e = _strip_paren(var_expr)
    if isinstance(e, A.FieldSel):
        return _is_field_read(e, lock_field, cm.decl)
    if isinstance(e, A.Name):
        sources = _local_write_sources(method, e.identifier)
        if sources is None:
            return False  # parameter: provenance unknown
        if not sources:
            # no local of that name: a bare name resolves to the field
            return e.identifier == lock_field.name
        return len(sources) == 1 and _is_field_read(sources[0], lock_field, cm.decl)
    return False


def lock_windows(
    cm: ClassModel,
    method: A.MethodDecl,
    cfg: Cfg,
    dom: DomInfo,
    lock_types: tuple[str, ...] = DEFAULT_LOCK_TYPES,
    lock_methods: tuple[str, ...] = DEFAULT_LOCK_METHODS,
    unlock_methods: tuple[str, ...] = DEFAULT_UNLOCK_METHODS,
) -> list[LockWindow]:
    """All dominance-ordered lock/unlock pairs on the class's lock fields."""
    fields = [f for f in cm.decl.fields if is_lock_type(f.declared_type, lock_types)
              or is_lock_type(f.resolved_type, lock_types)]
    if not fields or method.body is None:
        return []
    locks: dict[int, list[CfgNode]] = {}
    unlocks: dict[int, list[CfgNode]] = {}
    for e in _walk_exprs(method.body):
        if not isinstance(e, A.Call) or e.qualifier is None:
            continue
        if e.name not in lock_methods and e.name not in unlock_methods:
            continue
        node = cfg.node_for(e)
        if node is None:
            continue
        for f in fields:
            if represents(cm, f, e.qualifier, method):
                bucket = locks if e.name in lock_methods else unlocks
                bucket.setdefault(id(f), []).append(node)
    windows = []
    for f in fields:
        for lc in locks.get(id(f), ()):
            for uc in unlocks.get(id(f), ()):
                try:
                    if dominates(dom, lc, uc):
                        windows.append(LockWindow(lc, uc, f))
                except UnreachableNodeError:
                    continue
    return windows


def locally_locked_on(
    cfg: Cfg,
    dom: DomInfo,
    e: A.Expr,
    lock_field: A.FieldDecl,
    cm: ClassModel,
    lock_types: tuple[str, ...] = DEFAULT_LOCK_TYPES,
    lock_methods: tuple[str, ...] = DEFAULT_LOCK_METHODS,
    unlock_methods: tuple[str, ...] = DEFAULT_UNLOCK_METHODS,
) -> bool:
    """Is ``e`` inside a lock window of ``lock_field`` in this method?"""
    node = cfg.node_for(e)
    if node is None or cfg.method is None:
        return False
    for w in lock_windows(cm, cfg.method, cfg, dom, lock_types, lock_methods, unlock_methods):
        if w.field is not lock_field:
            continue
        try:
            if dominates(dom, w.lock_node, node) and post_dominates(dom, w.unlock_node, node):
                return True
        except UnreachableNodeError:
            continue
    return False


def _canonical_sync_monitor(expr: A.Expr, decl: A.ClassDecl) -> Monitor:
    e = _strip_paren(expr)
    if isinstance(e, A.This):
        return Monitor(MonitorKind.THIS, "this")
    if isinstance(e, A.Name) and decl.field_named(e.identifier) is not None:
        return Monitor(MonitorKind.SYNC_EXPR, f"this.{e.identifier}")
    if isinstance(e, A.FieldSel) and isinstance(e.qualifier, A.This) and decl.field_named(e.name) is not None:
        return Monitor(MonitorKind.SYNC_EXPR, f"this.{e.name}")
    if isinstance(e, A.ClassLit) and e.type_text.rsplit(".", 1)[-1] == decl.name:
        return Monitor(MonitorKind.CLASS, f"Class<{decl.name}>")
    return Monitor(MonitorKind.SYNC_EXPR, canonical_text(e))


def _sync_context_map(m: A.MethodDecl, decl: A.ClassDecl) -> dict[int, tuple[Monitor, ...]]:
    """id(ast node) -> monitors of every enclosing synchronized region."""
    out: dict[int, tuple[Monitor, ...]] = {}

    def visit(node, stack: tuple[Monitor, ...]):
        out[id(node)] = stack
        if isinstance(node, A.Sync):
            inner = stack + (_canonical_sync_monitor(node.monitor, decl),)
            _record_expr(node.monitor, stack)
            visit(node.body, inner)
            return
        from threadlint.accesspaths import _children

        for c in _children(node):
            if c is None:
                continue
            if isinstance(c, A.Expr):
                _record_expr(c, stack)
            else:
                visit(c, stack)

    def _record_expr(e, stack):
        out[id(e)] = stack
        from threadlint.accesspaths import _children

        for c in _children(e):
            if c is not None:
                _record_expr(c, stack)

    if m.body is not None:
        visit(m.body, ())
    return out


def locally_synchronized_on(cfg: Cfg, e: A.Expr, m: A.MethodDecl, decl: A.ClassDecl) -> frozenset[Monitor]:
    """Monitors guarding ``e`` through the synchronized keyword.

    Returns every applicable monitor: the method-level one (``this`` for
    synchronized instance methods, the class object for static ones) plus one
    per enclosing synchronized block; empty when none apply.
    """
    monitors: set[Monitor] = set()
    if m.is_synchronized:
        if m.is_static:
            monitors.add(Monitor(MonitorKind.CLASS, f"Class<{decl.name}>"))
        else:
            monitors.add(Monitor(MonitorKind.THIS, "this"))
    ctx = _sync_context_map(m, decl)
    monitors.update(ctx.get(id(e), ()))
    return frozenset(monitors)


class MonitorAnalysis:
    """Per-class monitor protection with cached CFGs, windows, and contexts."""

    def __init__(
        self,
        cm: ClassModel,
        facts: Optional[frozenset[AccessPathFact]] = None,
        cfgs: Optional[dict[int, tuple[Cfg, DomInfo]]] = None,
        lock_types: tuple[str, ...] = DEFAULT_LOCK_TYPES,
        lock_methods: tuple[str, ...] = DEFAULT_LOCK_METHODS,
        unlock_methods: tuple[str, ...] = DEFAULT_UNLOCK_METHODS,
    ):
        self.cm = cm
        self.facts = facts if facts is not None else provides_access(cm)
        self.lock_types = lock_types
        self.lock_methods = lock_methods
        self.unlock_methods = unlock_methods
        self._cfgs = cfgs or {}
        self._windows: dict[int, list[LockWindow]] = {}
        self._sync_ctx: dict[int, dict[int, tuple[Monitor, ...]]] = {}
        self._monitors_cache: dict[int, frozenset[Monitor]] = {}
        self._public_facts: dict[int, list[AccessPathFact]] = {}
        for f in self.facts:
            if f.method.is_public:
                self._public_facts.setdefault(id(f.access), []).append(f)

    def cfg_for(self, m: A.MethodDecl) -> tuple[Cfg, DomInfo]:
        entry = self._cfgs.get(id(m))
        if entry is None:
            cfg = build_cfg(m)
            entry = (cfg, dominance(cfg))
            self._cfgs[id(m)] = entry
        return entry

    def windows_for(self, m: A.MethodDecl) -> list[LockWindow]:
        if id(m) not in self._windows:
            cfg, dom = self.cfg_for(m)
            self._windows[id(m)] = lock_windows(
                self.cm, m, cfg, dom, self.lock_types, self.lock_methods, self.unlock_methods
            )
        return self._windows[id(m)]

    def _sync_context(self, m: A.MethodDecl) -> dict[int, tuple[Monitor, ...]]:
        if id(m) not in self._sync_ctx:
            self._sync_ctx[id(m)] = _sync_context_map(m, self.cm.decl)
        return self._sync_ctx[id(m)]

    def protecting_monitors(self, m: A.MethodDecl, expr: A.Expr) -> frozenset[Monitor]:
        """All monitors protecting the evaluation of ``expr`` inside ``m``."""
        out: set[Monitor] = set()
        if m.is_synchronized:
            if m.is_static:
                out.add(Monitor(MonitorKind.CLASS, f"Class<{self.cm.decl.name}>"))
            else:
                out.add(Monitor(MonitorKind.THIS, "this"))
        out.update(self._sync_context(m).get(id(expr), ()))
        cfg, dom = self.cfg_for(m)
        node = cfg.node_for(expr)
        if node is not None:
            for w in self.windows_for(m):
                try:
                    if dominates(dom, w.lock_node, node) and post_dominates(dom, w.unlock_node, node):
                        out.add(self._lock_field_monitor(w.field))
                except UnreachableNodeError:
                    continue
        return frozenset(out)

    def _lock_field_monitor(self, f: A.FieldDecl) -> Monitor:
        owner = self.cm.decl.qualified_name or self.cm.decl.name
        return Monitor(MonitorKind.LOCK_FIELD, f"{owner}.{f.name}")

    def public_facts(self, a: FieldAccess) -> list[AccessPathFact]:
        return self._public_facts.get(id(a), [])

    def monitors(self, a: FieldAccess) -> frozenset[Monitor]:
        """Monitors protecting every public access path to ``a`` (the paper's forex).

        Empty when no public path exists or when any public path is unguarded.
        """
        cached = self._monitors_cache.get(id(a))
        if cached is not None:
            return cached
        result: Optional[frozenset[Monitor]] = None
        pub = self.public_facts(a)
        if not pub:
            result = frozenset()
        else:
            for f in pub:
                prot = self.protecting_monitors(f.method, f.expr)
                result = prot if result is None else result & prot
                if not result:
                    break
        self._monitors_cache[id(a)] = result
        return result


def monitors(cm: ClassModel, facts: frozenset[AccessPathFact], a: FieldAccess, **kw) -> frozenset[Monitor]:
    """Convenience wrapper over MonitorAnalysis for one-off queries."""
    return MonitorAnalysis(cm, facts, **kw).monitors(a)
