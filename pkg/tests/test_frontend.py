"""Lexer and parser behavior: subset coverage, spans, round-trips, errors."""

import pytest

from conftest import CORPUS_DIR, corpus_source, line_of, parse_corpus

from threadlint.errors import ParseError, SpanOutOfRange
from threadlint.frontend import (
    SourceFile,
    annotated_as_thread_safe,
    parse_compilation_unit,
    parse_source,
    reconstruct_span,
    to_source,
    tokenize,
)
from threadlint.frontend import ast as A


def tokens_of(text):
    return [(t.kind, t.text) for t in tokenize(text)]


# --- lexer ---


def test_tokens_have_positions():
    toks = tokenize("int x = 0;\nx = 1;")
    assert [(t.text, t.line, t.col) for t in toks[:4]] == [
        ("int", 1, 1), ("x", 1, 5), ("=", 1, 7), ("0", 1, 9),
    ]
    assert toks[5].line == 2 and toks[5].col == 1


def test_comments_discarded():
    assert tokens_of("a /* b */ c // d\ne") == tokens_of("a c\ne")


def test_multichar_operators():
    texts = [t.text for t in tokenize("a >>>= b >>= c <<= d >>> e && f")][:-1]
    assert ">>>=" in texts and ">>=" in texts and "<<=" in texts and ">>>" in texts


@pytest.mark.parametrize(
    "src,msg",
    [
        ('"unterminated', "unterminated string"),
        ("'x", "unterminated character"),
        ("/* never closed", "unterminated block comment"),
        ("int € = 1;", "unexpected character"),
    ],
)
def test_lex_errors(src, msg):
    with pytest.raises(ParseError) as err:
        tokenize(src)
    assert msg in str(err.value)


# --- parser: paper examples ---


def test_counter_dr_structure():
    ast = parse_corpus("CounterDR.java")
    assert len(ast.classes) == 1
    c = ast.classes[0]
    assert c.name == "CounterDR"
    assert [f.name for f in c.fields] == ["cnt"]
    assert [m.name for m in c.methods] == ["inc"]
    assert c.fields[0].declared_type == "int"


def test_empty_input_parses_to_no_classes():
    ast = parse_source("")
    assert ast.classes == []


def test_unclosed_brace_is_parse_error():
    with pytest.raises(ParseError) as err:
        parse_source("class A {")
    assert err.value.line == 1


def test_annotated_as_thread_safe_matches_simple_and_qualified():
    ast = parse_corpus("Test.java")
    assert [c.name for c in annotated_as_thread_safe(ast)] == ["Test"]

    plain = parse_source("class A { }")
    assert annotated_as_thread_safe(plain) == []

    qualified = parse_source(
        "@javax.annotation.concurrent.ThreadSafe class B { }"
    )
    assert [c.name for c in annotated_as_thread_safe(qualified)] == ["B"]


def test_annotation_names_configurable():
    ast = parse_source("@GuardedClass class C { }")
    assert annotated_as_thread_safe(ast) == []
    assert [c.name for c in annotated_as_thread_safe(ast, ("GuardedClass",))] == ["C"]


# --- reconstruct_span ---


def test_reconstruct_statement_span():
    src = corpus_source("CounterDR.java")
    ast = parse_compilation_unit(src)
    inc = ast.classes[0].methods[0]
    write_stmt = inc.body.stmts[2]
    assert reconstruct_span(ast, write_stmt.span) == "cnt = temp;"


def test_reconstruct_zero_width_span():
    ast = parse_corpus("CounterDR.java")
    span = A.SourceSpan(ast.path, 5, 5, 1, 6, 1, 6)
    assert reconstruct_span(ast, span) == ""


def test_reconstruct_span_crossing_statements():
    src = corpus_source("CounterDR.java")
    ast = parse_compilation_unit(src)
    stmts = ast.classes[0].methods[0].body.stmts
    span = A.SourceSpan(ast.path, stmts[0].span.start, stmts[1].span.end, 0, 0, 0, 0)
    text = reconstruct_span(ast, span)
    assert text.startswith("int temp = cnt;") and text.endswith("temp += 1;")


def test_reconstruct_out_of_range():
    ast = parse_corpus("CounterDR.java")
    with pytest.raises(SpanOutOfRange):
        reconstruct_span(ast, A.SourceSpan(ast.path, 0, 10**6, 1, 1, 1, 1))
    with pytest.raises(SpanOutOfRange):
        reconstruct_span(ast, A.SourceSpan("other.java", 0, 1, 1, 1, 1, 2))


# --- round-trip and determinism properties ---


def _walk_nodes(node):
    yield node
    for name in ("classes", "fields", "methods", "constructors", "nested", "stmts",
                 "declarators", "params", "catches", "annotations"):
        for child in getattr(node, name, []) or []:
            yield from _walk_nodes(child)
    for name in ("body", "then", "els", "cond", "init", "update", "value", "monitor",
                 "iterable", "finally_block", "expr", "initializer", "qualifier",
                 "target", "left", "right", "operand", "inner", "base", "index"):
        child = getattr(node, name, None)
        if isinstance(child, (A.Node, A.Catch, A.Declarator)):
            yield from _walk_nodes(child)
        elif isinstance(child, list):
            for c in child:
                if isinstance(c, A.Node):
                    yield from _walk_nodes(c)


def _structure(node):
    kids = []
    for c in _walk_nodes(node):
        if c is not node:
            kids.append(_structure(c))
            break
    return (type(node).__name__, getattr(node, "span", None), tuple(kids))


def test_token_roundtrip_whole_corpus(corpus_names):
    for name in corpus_names:
        src = corpus_source(name)
        ast = parse_compilation_unit(src)
        reconstructed = to_source(ast)
        assert tokens_of(reconstructed) == tokens_of(src.content), name


def test_statement_spans_slice_original(corpus_names):
    for name in corpus_names:
        src = corpus_source(name)
        ast = parse_compilation_unit(src)
        for node in _walk_nodes(ast):
            span = getattr(node, "span", None)
            if span is None or not isinstance(node, A.Stmt):
                continue
            assert reconstruct_span(ast, span) in src.content, name


def test_span_nesting(corpus_names):
    for name in corpus_names:
        ast = parse_compilation_unit(corpus_source(name))
        for c in ast.iter_classes():
            for m in c.methods + c.constructors:
                assert c.span.contains(m.span)
                if m.body is not None:
                    assert m.span.contains(m.body.span)
                    for s in m.body.stmts:
                        assert m.body.span.contains(s.span)
            for f in c.fields:
                assert c.span.contains(f.span)
                if f.initializer is not None:
                    assert f.span.contains(f.initializer.span)


def test_parse_deterministic(corpus_names):
    for name in corpus_names:
        src = corpus_source(name)
        a1 = parse_compilation_unit(src)
        a2 = parse_compilation_unit(src)
        assert to_source(a1) == to_source(a2)
        spans1 = [n.span for n in _walk_nodes(a1) if hasattr(n, "span")]
        spans2 = [n.span for n in _walk_nodes(a2) if hasattr(n, "span")]
        assert spans1 == spans2


def test_pretty_print_idempotent(corpus_names):
    for name in corpus_names:
        src = corpus_source(name)
        once = to_source(parse_compilation_unit(src))
        twice = to_source(parse_compilation_unit(SourceFile(src.path, once)))
        assert once == twice


# --- subset coverage ---


def test_statement_kinds_parse():
    src = """
class K {
  int[] data = new int[8];
  int n;

  public int work(int a, boolean flag) {
    int acc = 0;
    if (flag) { acc = a; } else acc = -a;
    while (acc < 10) { acc = acc + 1; }
    for (int i = 0; i < 3; i++) { acc += i; }
    synchronized (this) { n = acc; }
    try { acc = acc / a; } catch (ArithmeticException e) { acc = 0; } finally { n = acc; }
    data[0] = acc;
    return acc;
  }
}
"""
    ast = parse_source(src)
    body = ast.classes[0].methods[0].body
    kinds = [type(s).__name__ for s in body.stmts]
    assert kinds == ["LocalDecl", "If", "While", "For", "Sync", "Try", "ExprStmt", "Return"]


def test_expression_kinds_parse():
    src = """
class E {
  public void all(int x) {
    int a = (1 + 2) * x % 3;
    boolean b = !(a == 4) && a <= 5 || a != 6;
    long c = a << 2 >> 1;
    Object o = new Object();
    int[] arr = new int[x];
    arr[0] = arr[0] + 1;
    a++;
    --a;
    String s = "s" + 'c' + null + true + 0x1F + 1.5e3f;
    Class k = E.class;
  }
}
"""
    ast = parse_source(src)
    assert len(ast.classes[0].methods[0].body.stmts) == 10


def test_nested_class_and_constructor():
    src = """
class Outer {
  private int x;

  Outer(int seed) {
    this.x = seed;
  }

  class Inner {
    private int y = 0;
  }
}
"""
    ast = parse_source(src)
    outer = ast.classes[0]
    assert len(outer.constructors) == 1
    assert outer.constructors[0].is_constructor
    assert [n.name for n in outer.nested] == ["Inner"]
    assert [c.name for c in ast.iter_classes()] == ["Outer", "Inner"]
    assert list(ast.iter_classes())[1].qualified_name == "Outer.Inner"


def test_generics_opaque_and_imports_resolve():
    src = """
import java.util.concurrent.ConcurrentHashMap;

class G {
  private ConcurrentHashMap<String, Integer> m;
  private java.util.List<int[]> l;
}
"""
    ast = parse_source(src)
    f0, f1 = ast.classes[0].fields
    assert f0.declared_type == "ConcurrentHashMap<String,Integer>"
    assert f0.resolved_type == "java.util.concurrent.ConcurrentHashMap<String,Integer>"
    assert f1.declared_type == "java.util.List<int[]>"


@pytest.mark.parametrize(
    "src,fragment",
    [
        ("class A { void f() { switch (x) { } } }", "switch"),
        ("class A { void f() { Runnable r = () -> 1; } }", "not supported"),
        ("class A { void f() { outer: while (true) { } } }", "labeled statements"),
        ("interface I { }", "interface"),
        ("class A { public private int x; }", "visibility"),
        ("class A { volatile final int x = 0; }", "volatile and final"),
        ("class A { void f() { do { } while (c); } }", "do/while"),
    ],
)
def test_unsupported_constructs_error(src, fragment):
    with pytest.raises(ParseError) as err:
        parse_source(src)
    assert fragment in str(err.value)


def test_package_qualifies_class_names():
    ast = parse_source("package com.acme.util;\nclass Thing { }")
    assert ast.classes[0].qualified_name == "com.acme.util.Thing"


def test_parse_error_reports_position():
    with pytest.raises(ParseError) as err:
        parse_source("class A {\n  int x = ;\n}")
    assert err.value.line == 2
