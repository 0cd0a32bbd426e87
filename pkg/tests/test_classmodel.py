"""Access collection, P1/P2, exposure, and modification classification."""

import pytest

from conftest import corpus_source, line_of, model_for, model_from_source

from threadlint.classmodel import (
    AccessKind,
    ThreadSafeTypeAllowlist,
    build_class_model,
    check_no_escaping,
    check_safe_publication,
    exposed_accesses,
    is_default_initialized,
    is_modifying,
)
from threadlint.frontend import parse_source


def kinds(accesses):
    return [(a.field.name, a.kind.value, a.line) for a in accesses]


# --- build_class_model ---


def test_counter_dr_accesses():
    src = corpus_source("CounterDR.java")
    cm = model_for("CounterDR.java")
    decl_line = line_of(src.content, "int cnt = 0;")
    read_line = line_of(src.content, "int temp = cnt;")
    write_line = line_of(src.content, "cnt = temp;")
    assert kinds(cm.field_accesses) == [
        ("cnt", "write", decl_line),
        ("cnt", "read", read_line),
        ("cnt", "write", write_line),
    ]
    assert cm.field_accesses[0].is_initializer_write


def test_class_without_fields_has_no_accesses():
    cm = model_from_source("@ThreadSafe class N { public void f() { int x = 1; } }")
    assert cm.field_accesses == []


def test_array_element_write():
    cm = model_from_source(
        "@ThreadSafe class A { private int[] arr = null; public void set(int i) { arr[i] = 3; } }"
    )
    method_accesses = [a for a in cm.field_accesses if not a.is_initializer_write]
    assert [(a.field.name, a.kind) for a in method_accesses] == [
        ("arr", AccessKind.ARRAY_ELEMENT_WRITE)
    ]


def test_locals_shadow_fields():
    cm = model_from_source(
        """@ThreadSafe
class S {
  private int v = 0;
  public void f(int v) { v = v + 1; }
  public void g() { int v = 2; v = v + 1; }
  public int h() { return v; }
}
"""
    )
    non_init = [a for a in cm.field_accesses if not a.is_initializer_write]
    assert kinds(non_init) == [("v", "read", 6)]


def test_compound_assignment_reads_and_writes():
    cm = model_from_source(
        "@ThreadSafe class C { private int n; public void f() { n += 2; n++; } }"
    )
    assert [a.kind.value for a in cm.field_accesses] == ["read", "write", "read", "write"]


def test_other_objects_fields_ignored():
    cm = model_from_source(
        "@ThreadSafe class O { private O peer = null; public void f() { peer.x = 1; int y = peer.x; } }"
    )
    non_init = [a for a in cm.field_accesses if not a.is_initializer_write]
    # only the reads of `peer` itself, not peer.x
    assert [(a.field.name, a.kind.value) for a in non_init] == [
        ("peer", "read"), ("peer", "read"),
    ]


def test_static_field_access_via_class_name():
    cm = model_from_source(
        "@ThreadSafe class T { private static int total = 0; public void f() { T.total = 5; } }"
    )
    non_init = [a for a in cm.field_accesses if not a.is_initializer_write]
    assert [(a.field.name, a.kind.value) for a in non_init] == [("total", "write")]


# --- P1 ---


def test_p1_counter_dr_package_visible_field():
    alerts = check_no_escaping(model_for("CounterDR.java"))
    assert [(a.rule, a.field) for a in alerts] == [("P1", "cnt")]


def test_p1_counter_ts_clean():
    assert check_no_escaping(model_for("CounterTS.java")) == []


def test_p1_ignores_final():
    cm = model_from_source("@ThreadSafe class F { public final int k = 1; }")
    assert [(a.rule, a.field) for a in check_no_escaping(cm)] == [("P1", "k")]


# --- P2 ---


def test_p2_counter_ts_clean():
    assert check_safe_publication(model_for("CounterTS.java")) == []


def test_p2_test_class_lock_field():
    alerts = check_safe_publication(model_for("Test.java"))
    assert [(a.rule, a.field) for a in alerts] == [("P2", "lock")]


def test_p2_volatile_uninitialized_clean():
    cm = model_from_source("@ThreadSafe class V { private volatile boolean flag; }")
    assert check_safe_publication(cm) == []


# --- is_default_initialized ---


@pytest.mark.parametrize(
    "field_src,expected",
    [
        ("int cnt = 0;", True),
        ("int x;", True),
        ("Lock l = new ReentrantLock();", False),
        ("long big = 0L;", True),
        ("long big = 0;", True),
        ("boolean done = false;", True),
        ("boolean done = true;", False),
        ("char c = '\\u0000';", True),
        ("Object o = null;", True),
        ("double d = 0.0;", True),
        ("int y = 1 - 1;", False),  # no constant folding, by design
        ("int z = 1;", False),
    ],
)
def test_is_default_initialized(field_src, expected):
    ast = parse_source(f"class D {{ {field_src} }}")
    assert is_default_initialized(ast.classes[0].fields[0]) is expected


# --- exposure ---


def test_exposed_counter_dr_excludes_initializer():
    src = corpus_source("CounterDR.java")
    cm = model_for("CounterDR.java")
    assert kinds(exposed_accesses(cm)) == [
        ("cnt", "read", line_of(src.content, "int temp = cnt;")),
        ("cnt", "write", line_of(src.content, "cnt = temp;")),
    ]


def test_exposed_excludes_volatile():
    cm = model_from_source(
        "@ThreadSafe class V { private volatile int v; public void f() { v = v + 1; } }"
    )
    assert exposed_accesses(cm) == []


def test_exposed_excludes_constructor_accesses():
    cm = model_from_source(
        "@ThreadSafe class C { private int n; C() { n = 5; } public int get() { return n; } }"
    )
    assert [(a.kind.value, a.enclosing.name) for a in exposed_accesses(cm)] == [("read", "get")]


def test_exposed_excludes_allowlisted_types():
    src = """
import java.util.concurrent.ConcurrentHashMap;

@ThreadSafe
class M {
  private final ConcurrentHashMap map = new ConcurrentHashMap();
  public Object get(String k) { return map.get(k); }
}
"""
    cm = model_from_source(src)
    assert exposed_accesses(cm) == []
    # without the allowlist the read would be exposed
    ast = parse_source(src)
    bare = build_class_model(ast.classes[0], allowlist=ThreadSafeTypeAllowlist((), ()))
    assert [(a.field.name, a.kind.value) for a in exposed_accesses(bare)] == [("map", "read")]


def test_exposed_requires_annotation():
    cm = model_from_source("class P { int n; public void f() { n = 1; } }")
    assert not cm.annotated
    assert exposed_accesses(cm) == []


def test_exposed_subset_of_field_accesses(corpus_names):
    for name in corpus_names:
        cm = model_for(name)
        all_ids = {id(a) for a in cm.field_accesses}
        for a in exposed_accesses(cm):
            assert id(a) in all_ids
            assert not a.field.is_volatile
            assert not a.is_initializer_write
            assert a.enclosing is not None and not a.enclosing.is_constructor


# --- is_modifying ---


def test_is_modifying_kinds():
    src = corpus_source("CounterDR.java")
    cm = model_for("CounterDR.java")
    read, write = exposed_accesses(cm)
    assert not is_modifying(read)
    assert is_modifying(write)


def test_mutator_call_is_modifying():
    cm = model_from_source(
        "@ThreadSafe class L { private java.util.List list = null; public void f(int x) { list.add(x); } }",
    )
    (access,) = [a for a in cm.field_accesses if not a.is_initializer_write]
    assert access.kind is AccessKind.MUTATOR_CALL
    assert is_modifying(access)


def test_non_mutator_call_is_read():
    cm = model_from_source(
        "@ThreadSafe class L { private java.util.List list = null; public int f() { return list.size(); } }",
    )
    (access,) = [a for a in cm.field_accesses if not a.is_initializer_write]
    assert access.kind is AccessKind.READ
    assert not is_modifying(access)


def test_allowlist_rejects_arrays_and_matches_prefix():
    al = ThreadSafeTypeAllowlist(("java.util.concurrent.",), ("com.acme.SafeBox",))
    assert al.contains_type("ConcurrentHashMap", "java.util.concurrent.ConcurrentHashMap")
    assert al.contains_type("SafeBox", "com.acme.SafeBox")
    assert not al.contains_type("SafeBox[]", "com.acme.SafeBox[]")
    assert not al.contains_type("HashMap", "java.util.HashMap")
    with pytest.raises(ValueError):
        ThreadSafeTypeAllowlist(("",), ())
