"""Which expressions in which methods lead to an exposed field access.

A Datalog-style least fixpoint: a method provides access to ``a`` either by
containing ``a`` directly or by calling (same-class, name + arity, no virtual
dispatch) a method that does. Overload ambiguity resolves to all candidates,
over-approximating, which preserves the universal quantification in the
monitor analysis.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional

from threadlint.classmodel import ClassModel, FieldAccess, exposed_accesses
from threadlint.frontend import ast as A


@dataclass(frozen=True, eq=False)
class AccessPathFact:
    """In ``method``, evaluating ``expr`` executes the field access ``access``."""

    method: A.MethodDecl
    expr: A.Expr
    access: FieldAccess


def _walk_exprs(stmt: A.Stmt) -> Iterator[A.Expr]:
    stack: list[object] = [stmt]
    while stack:
        node = stack.pop()
        if isinstance(node, A.Expr):
            yield node
        for child in _children(node):
            if child is not None:
                stack.append(child)


def _children(node) -> list:
    if isinstance(node, A.Block):
        return list(node.stmts)
    if isinstance(node, A.LocalDecl):
        return [d.init for d in node.declarators]
    if isinstance(node, A.ExprStmt):
        return [node.expr]
    if isinstance(node, A.If):
        return [node.cond, node.then, node.els]
    if isinstance(node, A.While):
        return [node.cond, node.body]
    if isinstance(node, A.For):
        return [node.init, node.cond, *node.update, node.body]
    if isinstance(node, A.ForEach):
        return [node.iterable, node.body]
    if isinstance(node, (A.Return, A.Throw)):
        return [node.value] if getattr(node, "value", None) is not None else []
    if isinstance(node, A.Sync):
        return [node.monitor, node.body]
    if isinstance(node, A.Try):
        return [node.body, *[c.body for c in node.catches], node.finally_block]
    if isinstance(node, A.FieldSel):
        return [node.qualifier]
    if isinstance(node, A.Call):
        return ([node.qualifier] if node.qualifier is not None else []) + list(node.args)
    if isinstance(node, A.New):
        return list(node.args or []) + list(node.dims or [])
    if isinstance(node, A.Index):
        return [node.base, node.index]
    if isinstance(node, A.Unary):
        return [node.operand]
    if isinstance(node, A.Binary):
        return [node.left, node.right]
    if isinstance(node, A.Assign):
        return [node.target, node.value]
    if isinstance(node, A.Paren):
        return [node.inner]
    return []


def same_class_calls(cm: ClassModel, m: A.MethodDecl) -> list[tuple[A.Call, tuple[A.MethodDecl, ...]]]:
    """Calls in ``m`` resolvable to methods of the same class.

    Only unqualified and ``this``-qualified calls resolve; a call through any
    other receiver targets a different object.
    """
    by_name: dict[tuple[str, int], list[A.MethodDecl]] = {}
    for cand in cm.decl.methods:
        by_name.setdefault((cand.name, cand.arity), []).append(cand)
    out = []
    if m.body is None:
        return out
    for e in _walk_exprs(m.body):
        if isinstance(e, A.Call) and (e.qualifier is None or isinstance(e.qualifier, A.This)):
            callees = by_name.get((e.name, len(e.args)))
            if callees:
                out.append((e, tuple(callees)))
    return out


def provides_access(cm: ClassModel, exposed: Optional[list[FieldAccess]] = None) -> frozenset[AccessPathFact]:
    """Least fixpoint of the direct-containment and call-step rules."""
    if exposed is None:
        exposed = exposed_accesses(cm)
    facts: set[AccessPathFact] = set()
    # access -> methods already known to provide it (for the call step)
    providers: dict[int, set[int]] = {}
    by_method_access: set[tuple[int, int, int]] = set()

    def add(m: A.MethodDecl, expr: A.Expr, a: FieldAccess) -> bool:
        key = (id(m), id(expr), id(a))
        if key in by_method_access:
            return False
        by_method_access.add(key)
        facts.add(AccessPathFact(m, expr, a))
        providers.setdefault(id(a), set()).add(id(m))
        return True

    for a in exposed:
        if a.enclosing is not None and not a.enclosing.is_constructor:
            add(a.enclosing, a.expr, a)

    calls = {id(m): same_class_calls(cm, m) for m in cm.decl.methods}

    changed = True
    while changed:
        changed = False
        for m in cm.decl.methods:
            for call, callees in calls[id(m)]:
                for k in callees:
                    for a in exposed:
                        if id(k) in providers.get(id(a), ()):
                            if add(m, call, a):
                                changed = True
    return frozenset(facts)


def public_access(
    cm: ClassModel,
    a: FieldAccess,
    facts: Optional[frozenset[AccessPathFact]] = None,
) -> set[A.Expr]:
    """Expressions in public methods whose evaluation executes ``a``."""
    if facts is None:
        facts = provides_access(cm)
    return {f.expr for f in facts if f.access is a and f.method.is_public}


def base_facts_only(cm: ClassModel) -> frozenset[AccessPathFact]:
    """The fixpoint with the recursive call rule removed (containment only)."""
    exposed = exposed_accesses(cm)
    return frozenset(
        AccessPathFact(a.enclosing, a.expr, a)
        for a in exposed
        if a.enclosing is not None and not a.enclosing.is_constructor
    )
