"""Per-class analysis model: field accesses, exposure, and the P1/P2 rules.

The model records every syntactic access to the class's own fields (reads,
writes, array-element writes, mutator calls, and the declared-initializer
write). Accesses to fields of other classes are ignored; those are governed
by the other class's own no-escaping rule.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from enum import Enum
from typing import Optional

from threadlint.alerts import Alert, RULE_NO_ESCAPING, RULE_SAFE_PUBLICATION
from threadlint.frontend import ast as A
from threadlint.frontend import DEFAULT_ANNOTATIONS

DEFAULT_MUTATOR_METHODS = ("add", "put", "remove", "set", "clear", "offer", "poll")
DEFAULT_ALLOWLIST_PREFIXES = ("java.util.concurrent.",)


class AccessKind(Enum):
    READ = "read"
    WRITE = "write"
    ARRAY_ELEMENT_WRITE = "arrayElementWrite"
    MUTATOR_CALL = "mutatorCall"


MODIFYING_KINDS = frozenset(
    {AccessKind.WRITE, AccessKind.ARRAY_ELEMENT_WRITE, AccessKind.MUTATOR_CALL}
)


@dataclass(frozen=True)
class ThreadSafeTypeAllowlist:
    """Types whose instances are trusted to synchronize internally."""

    qualified_prefixes: tuple[str, ...] = DEFAULT_ALLOWLIST_PREFIXES
    exact_types: tuple[str, ...] = ()

    def __post_init__(self):
        for entry in (*self.qualified_prefixes, *self.exact_types):
            if not entry or entry != entry.strip():
                raise ValueError(f"allowlist entry {entry!r} must be nonempty and trimmed")

    def extended(self, *, prefixes: tuple[str, ...] = (), exact: tuple[str, ...] = ()) -> "ThreadSafeTypeAllowlist":
        return ThreadSafeTypeAllowlist(
            self.qualified_prefixes + tuple(p.strip() for p in prefixes),
            self.exact_types + tuple(e.strip() for e in exact),
        )

    def contains_type(self, declared: str, resolved: str) -> bool:
        base_declared = declared.split("<", 1)[0]
        base_resolved = resolved.split("<", 1)[0]
        if base_declared.endswith("[]") or base_resolved.endswith("[]"):
            return False  # an array of thread-safe elements is not itself thread-safe
        if base_declared in self.exact_types or base_resolved in self.exact_types:
            return True
        return any(base_resolved.startswith(p) for p in self.qualified_prefixes)

    def contains(self, f: A.FieldDecl) -> bool:
        return self.contains_type(f.declared_type, f.resolved_type)


@dataclass(eq=False)
class FieldAccess:
    """A read or write of an own field at one source location."""

    field: A.FieldDecl
    kind: AccessKind
    span: A.SourceSpan
    enclosing: Optional[A.MethodDecl]  # None inside a field initializer
    expr: A.Expr
    is_initializer_write: bool = False

    @property
    def line(self) -> int:
        return self.span.start_line

    def describe(self) -> str:
        where = "initializer" if self.enclosing is None else self.enclosing.name
        return f"{self.kind.value} of {self.field.name} at line {self.line} in {where}"


@dataclass(eq=False)
class ClassModel:
    decl: A.ClassDecl
    field_accesses: list[FieldAccess]
    allowlist: ThreadSafeTypeAllowlist
    annotated: bool
    mutator_methods: tuple[str, ...] = DEFAULT_MUTATOR_METHODS

    @property
    def name(self) -> str:
        return self.decl.name

    @property
    def class_id(self) -> str:
        return self.decl.qualified_name or self.decl.name

    def accesses_of(self, field_name: str) -> list[FieldAccess]:
        return [a for a in self.field_accesses if a.field.name == field_name]


class _AccessCollector:
    """Walks callable bodies resolving bare names against locals, then fields."""

    def __init__(self, decl: A.ClassDecl, mutators: tuple[str, ...]):
        self.decl = decl
        self.fields = {f.name: f for f in decl.fields}
        self.mutators = frozenset(mutators)
        self.out: list[FieldAccess] = []
        self.scopes: list[set[str]] = []
        self.enclosing: Optional[A.MethodDecl] = None

    # -- scope helpers --

    def _is_local(self, name: str) -> bool:
        return any(name in s for s in self.scopes)

    def _own_field(self, name: str) -> Optional[A.FieldDecl]:
        if self._is_local(name):
            return None
        return self.fields.get(name)

    def _emit(self, f: A.FieldDecl, kind: AccessKind, expr: A.Expr,
              span: Optional[A.SourceSpan] = None, initializer: bool = False) -> None:
        self.out.append(FieldAccess(f, kind, span or expr.span, self.enclosing, expr, initializer))

    # -- entry points --

    def collect_initializers(self) -> None:
        self.enclosing = None
        self.scopes = [set()]
        for f in self.decl.fields:
            if f.initializer is not None:
                self.visit_expr(f.initializer)
                self._emit(f, AccessKind.WRITE, f.initializer, span=f.span, initializer=True)

    def collect_callable(self, m: A.MethodDecl) -> None:
        self.enclosing = m
        self.scopes = [{p.name for p in m.params}]
        if m.body is not None:
            for s in m.body.stmts:
                self.visit_stmt(s)

    # -- statements --

    def visit_stmt(self, s: A.Stmt) -> None:
        if isinstance(s, A.Block):
            self.scopes.append(set())
            for inner in s.stmts:
                self.visit_stmt(inner)
            self.scopes.pop()
        elif isinstance(s, A.LocalDecl):
            for d in s.declarators:
                if d.init is not None:
                    self.visit_expr(d.init)
                self.scopes[-1].add(d.name)
        elif isinstance(s, A.ExprStmt):
            self.visit_expr(s.expr)
        elif isinstance(s, A.If):
            self.visit_expr(s.cond)
            self.visit_stmt(s.then)
            if s.els is not None:
                self.visit_stmt(s.els)
        elif isinstance(s, A.While):
            self.visit_expr(s.cond)
            self.visit_stmt(s.body)
        elif isinstance(s, A.For):
            self.scopes.append(set())
            if s.init is not None:
                self.visit_stmt(s.init)
            if s.cond is not None:
                self.visit_expr(s.cond)
            self.visit_stmt(s.body)
            for e in s.update:
                self.visit_expr(e)
            self.scopes.pop()
        elif isinstance(s, A.ForEach):
            self.scopes.append({s.var})
            self.visit_expr(s.iterable)
            self.visit_stmt(s.body)
            self.scopes.pop()
        elif isinstance(s, A.Return):
            if s.value is not None:
                self.visit_expr(s.value)
        elif isinstance(s, A.Throw):
            self.visit_expr(s.value)
        elif isinstance(s, A.Sync):
            self.visit_expr(s.monitor)
            self.visit_stmt(s.body)
        elif isinstance(s, A.Try):
            self.visit_stmt(s.body)
            for c in s.catches:
                self.scopes.append({c.var})
                self.visit_stmt(c.body)
                self.scopes.pop()
            if s.finally_block is not None:
                self.visit_stmt(s.finally_block)
        elif isinstance(s, A.Empty):
            pass
        else:
            raise TypeError(f"unhandled statement {type(s).__name__}")

    # -- expressions --

    def visit_expr(self, e: A.Expr) -> None:
        if isinstance(e, (A.Literal, A.This, A.ClassLit)):
            return
        if isinstance(e, A.Name):
            f = self._own_field(e.identifier)
            if f is not None:
                self._emit(f, AccessKind.READ, e)
            return
        if isinstance(e, A.FieldSel):
            f = self._selected_own_field(e)
            if f is not None:
                self._emit(f, AccessKind.READ, e)
            else:
                self.visit_expr(e.qualifier)
            return
        if isinstance(e, A.Call):
            self._visit_call(e)
            return
        if isinstance(e, A.New):
            for a in e.args or ():
                self.visit_expr(a)
            for d in e.dims or ():
                self.visit_expr(d)
            return
        if isinstance(e, A.Index):
            self.visit_expr(e.base)
            self.visit_expr(e.index)
            return
        if isinstance(e, A.Unary):
            if e.op in ("++", "--"):
                self._visit_target(e.operand, compound=True)
            else:
                self.visit_expr(e.operand)
            return
        if isinstance(e, A.Binary):
            self.visit_expr(e.left)
            self.visit_expr(e.right)
            return
        if isinstance(e, A.Assign):
            if e.op == "=":
                self._visit_target(e.target, compound=False)
            else:
                self._visit_target(e.target, compound=True)
            self.visit_expr(e.value)
            return
        if isinstance(e, A.Paren):
            self.visit_expr(e.inner)
            return
        raise TypeError(f"unhandled expression {type(e).__name__}")

    def _selected_own_field(self, e: A.FieldSel) -> Optional[A.FieldDecl]:
        """Own field selected via ``this.x`` or ``ClassName.staticField``."""
        q = e.qualifier
        if isinstance(q, A.This):
            return self.fields.get(e.name)
        if isinstance(q, A.Name) and q.identifier == self.decl.name and not self._is_local(q.identifier):
            f = self.fields.get(e.name)
            if f is not None and f.is_static:
                return f
        return None

    def _visit_target(self, target: A.Expr, compound: bool) -> None:
        """Classify an assignment (or ++/--) target; compound targets also read."""
        if isinstance(target, A.Name):
            f = self._own_field(target.identifier)
            if f is not None:
                if compound:
                    self._emit(f, AccessKind.READ, target)
                self._emit(f, AccessKind.WRITE, target)
            return
        if isinstance(target, A.FieldSel):
            f = self._selected_own_field(target)
            if f is not None:
                if compound:
                    self._emit(f, AccessKind.READ, target)
                self._emit(f, AccessKind.WRITE, target)
            else:
                self.visit_expr(target.qualifier)
            return
        if isinstance(target, A.Index):
            base = target
            indices = []
            while isinstance(base, A.Index):
                indices.append(base.index)
                base = base.base
            root_field = None
            if isinstance(base, A.Name):
                root_field = self._own_field(base.identifier)
            elif isinstance(base, A.FieldSel):
                root_field = self._selected_own_field(base)
            if root_field is not None:
                self._emit(root_field, AccessKind.ARRAY_ELEMENT_WRITE, target)
            else:
                self.visit_expr(base)
            for ix in indices:
                self.visit_expr(ix)
            return
        self.visit_expr(target)

    def _visit_call(self, e: A.Call) -> None:
        q = e.qualifier
        target_field = None
        if isinstance(q, A.Name):
            target_field = self._own_field(q.identifier)
        elif isinstance(q, A.FieldSel):
            target_field = self._selected_own_field(q)
        if target_field is not None:
            if e.name in self.mutators:
                self._emit(target_field, AccessKind.MUTATOR_CALL, e, span=e.span)
            else:
                self._emit(target_field, AccessKind.READ, q, span=q.span)
        elif q is not None and not isinstance(q, A.This):
            self.visit_expr(q)
        for a in e.args:
            self.visit_expr(a)


def build_class_model(
    decl: A.ClassDecl,
    allowlist: ThreadSafeTypeAllowlist = ThreadSafeTypeAllowlist(),
    annotation_names: tuple[str, ...] = DEFAULT_ANNOTATIONS,
    mutator_methods: tuple[str, ...] = DEFAULT_MUTATOR_METHODS,
) -> ClassModel:
    """Collect and classify every access to the class's own fields, in file order."""
    collector = _AccessCollector(decl, mutator_methods)
    collector.collect_initializers()
    for ctor in decl.constructors:
        collector.collect_callable(ctor)
    for m in decl.methods:
        collector.collect_callable(m)
    accesses = sorted(collector.out, key=lambda a: (a.span.start, a.span.end))
    wanted = {n.rsplit(".", 1)[-1] for n in annotation_names}
    annotated = bool(decl.annotation_simple_names() & wanted)
    return ClassModel(decl, accesses, allowlist, annotated, mutator_methods)


def is_default_initialized(f: A.FieldDecl) -> bool:
    """True when the declaration leaves the field at its JVM default value.

    Purely syntactic: the initializer must be the literal default for the
    declared type (``int x = 1 - 1;`` does not count).
    """
    if f.initializer is None:
        return True
    init = f.initializer
    if not isinstance(init, A.Literal):
        return False
    return init.text in A.default_literals_for(f.declared_type)


def check_no_escaping(cm: ClassModel) -> list[Alert]:
    """P1: every field of a thread-safe class must be private."""
    alerts = []
    for f in cm.decl.fields:
        if not f.is_private:
            alerts.append(
                Alert(
                    rule=RULE_NO_ESCAPING,
                    primary=f.span,
                    field=f.name,
                    message=f"field '{f.name}' is not private; class state can escape",
                    class_id=cm.class_id,
                )
            )
    return alerts


def check_safe_publication(cm: ClassModel) -> list[Alert]:
    """P2: every field must be default-initialized, final, or volatile."""
    alerts = []
    for f in cm.decl.fields:
        if f.is_final or f.is_volatile or is_default_initialized(f):
            continue
        alerts.append(
            Alert(
                rule=RULE_SAFE_PUBLICATION,
                primary=f.span,
                field=f.name,
                message=(
                    f"field '{f.name}' is not safely published: not initialized to its "
                    "default value and neither final nor volatile"
                ),
                class_id=cm.class_id,
            )
        )
    return alerts


def exposed_accesses(cm: ClassModel) -> list[FieldAccess]:
    """Accesses that need explicit synchronization.

    Excluded: volatile fields, the declared-initializer write (and any reads
    inside initializers), accesses inside constructors, and fields whose
    declared type is on the thread-safe allowlist.
    """
    if not cm.annotated:
        return []
    out = []
    for a in cm.field_accesses:
        if a.field.is_volatile or a.is_initializer_write:
            continue
        if a.enclosing is None or a.enclosing.is_constructor:
            continue
        if cm.allowlist.contains(a.field):
            continue
        out.append(a)
    return out


def is_modifying(a: FieldAccess) -> bool:
    """Writes, array-element writes, and configured mutator calls modify a field."""
    return a.kind in MODIFYING_KINDS
