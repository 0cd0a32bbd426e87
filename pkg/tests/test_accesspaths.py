"""Transitive call-reachability facts (providesAccess / publicAccess)."""

from conftest import model_for, model_from_source

from threadlint.accesspaths import base_facts_only, provides_access, public_access
from threadlint.classmodel import exposed_accesses


def fact_names(facts, access):
    return sorted(f.method.name for f in facts if f.access is access)


def test_test_class_facts_match_paper_listing():
    cm = model_for("Test.java")
    (write_y,) = exposed_accesses(cm)
    facts = provides_access(cm)
    assert fact_names(facts, write_y) == ["setY", "setYPrivate"]
    direct = next(f for f in facts if f.method.name == "setYPrivate")
    assert direct.expr is write_y.expr
    via_call = next(f for f in facts if f.method.name == "setY")
    assert type(via_call.expr).__name__ == "Call"
    assert via_call.expr.name == "setYPrivate"


def test_base_case_public_method_containing_access():
    cm = model_from_source(
        "@ThreadSafe class B { private int n; public void set(int v) { n = v; } }"
    )
    (w,) = exposed_accesses(cm)
    facts = provides_access(cm)
    assert len([f for f in facts if f.access is w]) == 1
    assert public_access(cm, w, facts) == {w.expr}


def test_three_method_chain_yields_three_facts():
    cm = model_from_source(
        """@ThreadSafe
class Chain {
  private int n;
  private void inner() { n = 1; }
  private void middle() { inner(); }
  public void outer() { middle(); }
}
"""
    )
    (w,) = exposed_accesses(cm)
    facts = [f for f in provides_access(cm) if f.access is w]
    assert sorted(f.method.name for f in facts) == ["inner", "middle", "outer"]


def test_private_only_access_has_empty_public_access():
    cm = model_from_source(
        """@ThreadSafe
class Hidden {
  private int n;
  private void touch() { n = 2; }
}
"""
    )
    (w,) = exposed_accesses(cm)
    assert public_access(cm, w) == set()


def test_two_public_entry_points_two_expressions():
    cm = model_from_source(
        """@ThreadSafe
class Two {
  private int n;
  private void raw(int v) { n = v; }
  public void a(int v) { raw(v); }
  public void b(int v) { raw(v); }
}
"""
    )
    (w,) = exposed_accesses(cm)
    exprs = public_access(cm, w)
    assert len(exprs) == 2
    assert all(e.name == "raw" for e in exprs)


def test_recursion_terminates():
    cm = model_from_source(
        """@ThreadSafe
class R {
  private int n;
  public void ping(int d) { n = d; pong(d); }
  public void pong(int d) { ping(d); }
}
"""
    )
    (w,) = exposed_accesses(cm)
    facts = [f for f in provides_access(cm) if f.access is w]
    # ping provides access directly and again through its call to pong
    assert sorted(f.method.name for f in facts) == ["ping", "ping", "pong"]


def test_base_facts_are_subset_of_fixpoint(corpus_names):
    for name in corpus_names:
        cm = model_for(name)
        base = base_facts_only(cm)
        full = provides_access(cm)
        base_keys = {(id(f.method), id(f.expr), id(f.access)) for f in base}
        full_keys = {(id(f.method), id(f.expr), id(f.access)) for f in full}
        assert base_keys <= full_keys, name


def test_overload_resolution_by_arity():
    cm = model_from_source(
        """@ThreadSafe
class Olo {
  private int n;
  private void set(int v) { n = v; }
  private void set(int v, int w) { int unused = v + w; }
  public void go(int v) { set(v); }
}
"""
    )
    (w,) = exposed_accesses(cm)
    facts = [f for f in provides_access(cm) if f.access is w]
    assert sorted(f.method.name for f in facts) == ["go", "set"]


def test_calls_on_other_receivers_do_not_resolve():
    cm = model_from_source(
        """@ThreadSafe
class Recv {
  private int n;
  private Recv peer = null;
  private void set(int v) { n = v; }
  public void viaPeer(int v) { peer.set(v); }
  public void viaThis(int v) { this.set(v); }
}
"""
    )
    w = next(a for a in exposed_accesses(cm) if a.field.name == "n")
    facts = [f for f in provides_access(cm) if f.access is w]
    assert sorted(f.method.name for f in facts) == ["set", "viaThis"]
