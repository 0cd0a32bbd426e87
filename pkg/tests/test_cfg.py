"""CFG lowering and dominance, checked against brute-force path enumeration."""

import random

import pytest

from conftest import parse_corpus

from threadlint.cfg import (
    build_cfg,
    compute_dom_info,
    dominance,
    dominates,
    post_dominates,
)
from threadlint.errors import UnreachableNodeError
from threadlint.frontend import parse_source


def method_cfg(src: str, method: str = None, class_index: int = 0):
    ast = parse_source(src)
    decl = ast.classes[class_index]
    m = decl.methods[0] if method is None else next(x for x in decl.methods if x.name == method)
    cfg = build_cfg(m)
    return cfg, dominance(cfg)


# --- brute-force oracle over simple paths ---


def all_simple_paths(succs, start, goal):
    paths = []
    stack = [(start, (start,))]
    while stack:
        node, path = stack.pop()
        if node == goal:
            paths.append(path)
            continue
        for nxt in succs.get(node, ()):
            if nxt not in path:
                stack.append((nxt, path + (nxt,)))
    return paths


def brute_dominates(succs, entry, a, b):
    paths = all_simple_paths(succs, entry, b)
    assert paths, f"{b} unreachable from {entry}"
    return all(a in p for p in paths)


def reverse_graph(succs, nodes):
    preds = {n: [] for n in nodes}
    for n, outs in succs.items():
        for m in outs:
            preds[m].append(n)
    return preds


def random_graph(rng, n):
    """Random digraph where every node is reachable from 0 and reaches n-1."""
    succs = {i: [] for i in range(n)}
    for i in range(1, n):
        succs[rng.randrange(i)].append(i)
    for i in range(n - 1):
        j = rng.randrange(i + 1, n)
        if j not in succs[i]:
            succs[i].append(j)
    extra = rng.randrange(0, 2 * n)
    for _ in range(extra):
        a, b = rng.randrange(n), rng.randrange(n)
        if a != b and b != 0 and a != n - 1 and b not in succs[a]:
            succs[a].append(b)
    return succs


def check_against_brute_force(succs, n):
    entry, exit_node = 0, n - 1
    nodes = list(range(n))
    preds = reverse_graph(succs, nodes)
    info = compute_dom_info(entry, exit_node, succs, preds)
    reachable = [x for x in nodes if x == entry or x in info.idom]
    co_reachable = [x for x in nodes if x == exit_node or x in info.ipdom]
    for a in reachable:
        for b in reachable:
            assert dominates(info, a, b) == brute_dominates(succs, entry, a, b), (succs, a, b)
    for a in co_reachable:
        for b in co_reachable:
            expected = brute_dominates(preds, exit_node, a, b)
            assert post_dominates(info, a, b) == expected, (succs, a, b)


def test_dominance_matches_brute_force_small_sample():
    rng = random.Random(20240817)
    for _ in range(40):
        n = rng.randrange(4, 13)
        check_against_brute_force(random_graph(rng, n), n)


def test_duality_dominators_of_reverse_equal_postdominators():
    rng = random.Random(7)
    for _ in range(30):
        n = rng.randrange(4, 13)
        succs = random_graph(rng, n)
        preds = reverse_graph(succs, range(n))
        info = compute_dom_info(0, n - 1, succs, preds)
        flipped = compute_dom_info(n - 1, 0, preds, succs)
        co_reachable = [x for x in range(n) if x == n - 1 or x in info.ipdom]
        for a in co_reachable:
            for b in co_reachable:
                assert post_dominates(info, a, b) == dominates(flipped, a, b)


# --- structured lowering ---


def test_straight_line_chain():
    cfg, dom = method_cfg(
        """class C {
  int cnt; Object l;
  public void inc() {
    l.lock();
    int temp = cnt;
    temp += 1;
    cnt = temp;
    l.unlock();
  }
}"""
    )
    stmt_nodes = [n for n in cfg.nodes if n.kind == "stmt"]
    assert len(stmt_nodes) == 5
    chain = [cfg.entry] + stmt_nodes + [cfg.exit]
    for a, b in zip(chain, chain[1:]):
        assert cfg.succs[a] == [b]
    for i, a in enumerate(chain):
        for b in chain[i:]:
            assert dominates(dom, a, b)
            assert post_dominates(dom, b, a)


def test_diamond_dominance():
    cfg, dom = method_cfg(
        """class C {
  int a; int b; int c;
  public void f(boolean cond) {
    if (cond) { a = 1; } else { b = 2; }
    c = 3;
  }
}"""
    )
    cond = next(n for n in cfg.nodes if n.kind == "cond")
    then_n = next(n for n in cfg.nodes if n.kind == "stmt" and "a = 1" in _src_of(n))
    else_n = next(n for n in cfg.nodes if n.kind == "stmt" and "b = 2" in _src_of(n))
    join = next(n for n in cfg.nodes if n.kind == "stmt" and "c = 3" in _src_of(n))
    assert dominates(dom, cond, join)
    assert not dominates(dom, then_n, join)
    assert not dominates(dom, else_n, join)
    assert post_dominates(dom, join, cond)
    assert not post_dominates(dom, then_n, cond)


def _src_of(node):
    from threadlint.frontend.printer import to_source

    return to_source(node.ast) if node.ast is not None else ""


def test_entry_dominates_every_reachable_node():
    cfg, dom = method_cfg(
        "class C { int x; public void f(boolean c) { if (c) { x = 1; } x = 2; } }"
    )
    for n in cfg.nodes:
        assert dominates(dom, cfg.entry, n)
        assert dominates(dom, n, n)  # reflexive
        assert post_dominates(dom, cfg.exit, n)


def test_try_finally_routes_early_return_through_finally():
    cfg, dom = method_cfg(
        """class C {
  int v; Object lock;
  public int swap(int nxt) {
    lock.lock();
    try {
      int old = v;
      v = nxt;
      return old;
    } finally {
      lock.unlock();
    }
  }
}"""
    )
    ret = next(n for n in cfg.nodes if n.kind == "stmt" and "return old" in _src_of(n))
    fin = next(n for n in cfg.nodes if n.kind == "stmt" and "unlock" in _src_of(n))
    write = next(n for n in cfg.nodes if n.kind == "stmt" and "v = nxt" in _src_of(n))
    assert cfg.succs[ret] == [fin]
    assert post_dominates(dom, fin, ret)
    assert post_dominates(dom, fin, write)
    lock_call = next(n for n in cfg.nodes if n.kind == "stmt" and "lock.lock" in _src_of(n))
    assert dominates(dom, lock_call, write)


def test_loop_body_does_not_dominate_after_loop():
    cfg, dom = method_cfg(
        """class C {
  int x; Object l;
  public void f(int n) {
    int i = 0;
    while (i < n) {
      l.lock();
      x = i;
      l.unlock();
      i = i + 1;
    }
    x = 0;
  }
}"""
    )
    lock_call = next(n for n in cfg.nodes if n.kind == "stmt" and "l.lock" in _src_of(n))
    after = next(n for n in cfg.nodes if n.kind == "stmt" and "x = 0" in _src_of(n))
    assert not dominates(dom, lock_call, after)
    head = next(n for n in cfg.nodes if n.kind == "loop")
    assert dominates(dom, head, after)


def test_synchronized_block_single_entry_exit():
    cfg, dom = method_cfg(
        """class C {
  int x; Object mu;
  public void f(boolean c) {
    synchronized (mu) {
      if (c) { x = 1; } else { x = 2; }
    }
    x = 3;
  }
}"""
    )
    enter = next(n for n in cfg.nodes if n.kind == "sync_enter")
    leave = next(n for n in cfg.nodes if n.kind == "sync_exit")
    for n in cfg.nodes:
        if n.kind in ("stmt", "cond") and n is not enter:
            if dominates(dom, enter, n) and post_dominates(dom, leave, n):
                continue
    writes = [n for n in cfg.nodes if n.kind == "stmt" and "x = 1" in _src_of(n)]
    assert writes and dominates(dom, enter, writes[0])
    assert post_dominates(dom, leave, writes[0])


def test_unreachable_code_queries_raise():
    cfg, dom = method_cfg(
        "class C { int x; public int f() { return 1; x = 2; } }"
    )
    dead = next(n for n in cfg.nodes if n.kind == "stmt" and "x = 2" in _src_of(n))
    with pytest.raises(UnreachableNodeError):
        dominates(dom, cfg.entry, dead)


def test_expressions_map_to_their_statement_node():
    ast = parse_source(
        "class C { int x; Object l; public void f() { l.lock(); x = 1; l.unlock(); } }"
    )
    m = ast.classes[0].methods[0]
    cfg = build_cfg(m)
    stmt = m.body.stmts[1]
    assert cfg.node_for(stmt.expr) is cfg.node_for(stmt)
    assert cfg.node_for(stmt.expr.target) is cfg.node_for(stmt)


def test_corpus_methods_build_and_exit_reachable(corpus_names):
    for name in corpus_names:
        ast = parse_corpus(name)
        for c in ast.iter_classes():
            for m in c.methods + c.constructors:
                cfg = build_cfg(m)
                dom = dominance(cfg)
                assert dominates(dom, cfg.entry, cfg.exit)
                assert post_dominates(dom, cfg.exit, cfg.entry)
