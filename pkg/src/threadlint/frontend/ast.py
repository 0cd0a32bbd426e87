"""AST for the supported Java subset.

Nodes use identity equality (eq=False) so they can key dicts and sets; use
:func:`threadlint.frontend.printer.to_source` for structural comparisons.
Every node carries a :class:`SourceSpan` with 1-based line/column pairs and
half-open character offsets into the original file.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Optional, Union

from threadlint.errors import SpanOutOfRange

VISIBILITIES = ("public", "protected", "package", "private")

PRIMITIVE_DEFAULT_LITERALS = {
    "byte": ("0",),
    "short": ("0",),
    "int": ("0",),
    "long": ("0", "0L", "0l"),
    "char": ("'\\u0000'", "'\\0'"),
    "float": ("0", "0.0", ".0", "0f", "0F", "0.0f", "0.0F"),
    "double": ("0", "0.0", ".0", "0d", "0D", "0.0d", "0.0D"),
    "boolean": ("false",),
}


@dataclass(frozen=True)
class SourceSpan:
    """Half-open slice [start, end) of one source file."""

    file: str
    start: int
    end: int
    start_line: int
    start_col: int
    end_line: int
    end_col: int

    def contains(self, other: "SourceSpan") -> bool:
        return self.start <= other.start and other.end <= self.end

    def location(self) -> str:
        return f"{self.file}:{self.start_line}:{self.start_col}"


@dataclass(eq=False)
class Node:
    span: SourceSpan


# --- expressions -----------------------------------------------------------


@dataclass(eq=False)
class Expr(Node):
    pass


@dataclass(eq=False)
class Literal(Expr):
    kind: str  # int | long | float | double | boolean | char | string | null
    text: str  # raw source text, e.g. "0L", "'\\u0000'"


@dataclass(eq=False)
class Name(Expr):
    identifier: str


@dataclass(eq=False)
class This(Expr):
    pass


@dataclass(eq=False)
class FieldSel(Expr):
    qualifier: Expr
    name: str


@dataclass(eq=False)
class ClassLit(Expr):
    type_text: str  # "Foo" in Foo.class


@dataclass(eq=False)
class Call(Expr):
    qualifier: Optional[Expr]
    name: str
    args: list[Expr]


@dataclass(eq=False)
class New(Expr):
    type_text: str
    args: Optional[list[Expr]]  # constructor arguments, None for arrays
    dims: Optional[list[Expr]]  # array dimension expressions, None otherwise


@dataclass(eq=False)
class Index(Expr):
    base: Expr
    index: Expr


@dataclass(eq=False)
class Unary(Expr):
    op: str
    operand: Expr
    prefix: bool


@dataclass(eq=False)
class Binary(Expr):
    op: str
    left: Expr
    right: Expr


@dataclass(eq=False)
class Assign(Expr):
    target: Expr
    op: str  # "=", "+=", ...
    value: Expr


@dataclass(eq=False)
class Paren(Expr):
    inner: Expr


# --- statements ------------------------------------------------------------


@dataclass(eq=False)
class Stmt(Node):
    pass


@dataclass(eq=False)
class Block(Stmt):
    stmts: list[Stmt]


@dataclass(eq=False)
class Declarator:
    name: str
    init: Optional[Expr]
    span: SourceSpan


@dataclass(eq=False)
class LocalDecl(Stmt):
    type_text: str
    declarators: list[Declarator]
    is_final: bool = False


@dataclass(eq=False)
class ExprStmt(Stmt):
    expr: Expr


@dataclass(eq=False)
class If(Stmt):
    cond: Expr
    then: Stmt
    els: Optional[Stmt]


@dataclass(eq=False)
class While(Stmt):
    cond: Expr
    body: Stmt


@dataclass(eq=False)
class For(Stmt):
    init: Optional[Stmt]  # LocalDecl or ExprStmt-like list lowered to Block
    cond: Optional[Expr]
    update: list[Expr]
    body: Stmt


@dataclass(eq=False)
class ForEach(Stmt):
    type_text: str
    var: str
    iterable: Expr
    body: Stmt
    is_final: bool = False


@dataclass(eq=False)
class Return(Stmt):
    value: Optional[Expr]


@dataclass(eq=False)
class Throw(Stmt):
    value: Expr


@dataclass(eq=False)
class Sync(Stmt):
    monitor: Expr
    body: Block


@dataclass(eq=False)
class Catch:
    type_text: str
    var: str
    body: Block
    span: SourceSpan


@dataclass(eq=False)
class Try(Stmt):
    body: Block
    catches: list[Catch]
    finally_block: Optional[Block]


@dataclass(eq=False)
class Empty(Stmt):
    pass


# --- declarations ----------------------------------------------------------


@dataclass(eq=False)
class Annotation:
    name: str  # as written: "ThreadSafe" or "javax.annotation.concurrent.ThreadSafe"
    args_src: Optional[str]  # raw "(...)" text, None when absent
    span: SourceSpan

    @property
    def simple_name(self) -> str:
        return self.name.rsplit(".", 1)[-1]


@dataclass(eq=False)
class Param:
    type_text: str
    name: str
    span: SourceSpan
    is_final: bool = False


@dataclass(eq=False)
class FieldDecl(Node):
    name: str
    declared_type: str  # normalized source form, e.g. "Map<String,Integer>"
    resolved_type: str  # qualified via imports when resolvable, else declared_type
    modifiers: frozenset[str]
    initializer: Optional[Expr]
    annotations: list[Annotation] = field(default_factory=list)

    @property
    def is_private(self) -> bool:
        return "private" in self.modifiers

    @property
    def is_final(self) -> bool:
        return "final" in self.modifiers

    @property
    def is_volatile(self) -> bool:
        return "volatile" in self.modifiers

    @property
    def is_static(self) -> bool:
        return "static" in self.modifiers


@dataclass(eq=False)
class MethodDecl(Node):
    name: str
    visibility: str  # public | protected | package | private
    is_static: bool
    is_synchronized: bool
    params: list[Param]
    body: Optional[Block]
    return_type: Optional[str]  # None for constructors
    modifiers: frozenset[str] = frozenset()
    annotations: list[Annotation] = field(default_factory=list)
    is_constructor: bool = False
    throws: list[str] = field(default_factory=list)

    @property
    def is_public(self) -> bool:
        return self.visibility == "public"

    @property
    def arity(self) -> int:
        return len(self.params)


@dataclass(eq=False)
class ClassDecl(Node):
    name: str
    annotations: list[Annotation]
    fields: list[FieldDecl]
    methods: list[MethodDecl]
    constructors: list[MethodDecl]
    nested: list["ClassDecl"] = field(default_factory=list)
    modifiers: frozenset[str] = frozenset()
    extends: Optional[str] = None
    implements: list[str] = field(default_factory=list)
    qualified_name: str = ""

    def field_named(self, name: str) -> Optional[FieldDecl]:
        for f in self.fields:
            if f.name == name:
                return f
        return None

    def annotation_simple_names(self) -> set[str]:
        return {a.simple_name for a in self.annotations}


@dataclass(eq=False)
class ImportDecl:
    qualified: str
    wildcard: bool
    is_static: bool
    span: SourceSpan

    @property
    def simple_name(self) -> str:
        return self.qualified.rsplit(".", 1)[-1]


@dataclass(eq=False)
class Ast:
    path: str
    source: str
    package: Optional[str]
    imports: list[ImportDecl]
    classes: list[ClassDecl]

    def iter_classes(self) -> Iterator[ClassDecl]:
        """All classes, nested included, in file order."""
        stack = list(reversed(self.classes))
        while stack:
            c = stack.pop()
            yield c
            stack.extend(reversed(c.nested))


CallableDecl = MethodDecl
Declaration = Union[ClassDecl, FieldDecl, MethodDecl]


def reconstruct_span(ast: Ast, span: SourceSpan) -> str:
    """Exact source slice covered by ``span``.

    Raises SpanOutOfRange when the span does not belong to this file.
    """
    if span.file != ast.path:
        raise SpanOutOfRange(f"span belongs to {span.file!r}, not {ast.path!r}")
    if not (0 <= span.start <= span.end <= len(ast.source)):
        raise SpanOutOfRange(f"span [{span.start},{span.end}) outside file of length {len(ast.source)}")
    return ast.source[span.start : span.end]


def annotated_as_thread_safe(ast: Ast, annotation_names: tuple[str, ...] = ("ThreadSafe",)) -> list[ClassDecl]:
    """Classes (nested included) carrying one of the configured annotations.

    Matching is by simple name: ``@ThreadSafe`` and
    ``@javax.annotation.concurrent.ThreadSafe`` both match the default set.
    """
    wanted = {n.rsplit(".", 1)[-1] for n in annotation_names}
    return [c for c in ast.iter_classes() if c.annotation_simple_names() & wanted]


def default_literals_for(type_text: str) -> tuple[str, ...]:
    """Literal spellings of the default value for a declared type.

    Reference types default to null; primitives to their JVM zero value.
    """
    base = type_text.split("<", 1)[0]
    if base.endswith("[]"):
        return ("null",)
    return PRIMITIVE_DEFAULT_LITERALS.get(base, ("null",))
