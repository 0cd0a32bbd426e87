"""Conflicting pairs, P3 alerts, and whole-class aggregation."""

from conftest import corpus_source, line_of, model_for, model_from_source

from threadlint.raceanalysis import (
    analyze_class,
    check_correct_synchronization,
    conflicting_pairs,
)


def pair_lines(pairs):
    return [(p.a.field.name, p.a.line, p.b.line) for p in pairs]


def rules_of(alerts):
    return [a.rule for a in alerts]


# --- conflicting_pairs ---


def test_counter_dr_pairs_match_paper_example():
    src = corpus_source("CounterDR.java")
    cm = model_for("CounterDR.java")
    read_line = line_of(src.content, "int temp = cnt;")
    write_line = line_of(src.content, "cnt = temp;")
    assert pair_lines(conflicting_pairs(cm)) == [
        ("cnt", write_line, read_line),
        ("cnt", write_line, write_line),
    ]


def test_volatile_fields_never_pair():
    cm = model_from_source(
        """@ThreadSafe
class V {
  private volatile int v;
  public void w() { v = 1; }
  public int r() { return v; }
}
"""
    )
    assert conflicting_pairs(cm) == []


def test_two_reads_do_not_conflict():
    cm = model_from_source(
        """@ThreadSafe
class RR {
  private int n = 0;
  public int a() { return n; }
  public int b() { return n; }
}
"""
    )
    assert conflicting_pairs(cm) == []


def test_pair_dedup_modifying_first():
    cm = model_from_source(
        """@ThreadSafe
class D {
  private int n = 0;
  public int get() { return n; }
  public void set(int v) { n = v; }
}
"""
    )
    pairs = conflicting_pairs(cm)
    # (read, write) collapses to one pair with the write first, plus (w, w)
    assert len(pairs) == 2
    assert all(p.a.kind.value == "write" for p in pairs)


# --- check_correct_synchronization ---


def test_counter_dr_two_p3_alerts():
    cm = model_for("CounterDR.java")
    alerts = check_correct_synchronization(cm)
    assert rules_of(alerts) == ["P3", "P3"]
    assert all(a.secondary is not None for a in alerts)


def test_counter_ts_no_p3_alerts():
    assert check_correct_synchronization(model_for("CounterTS.java")) == []


def test_mismatched_monitors_alert():
    cm = model_from_source(
        """@ThreadSafe
class MM {
  private int n = 0;
  private final Lock l = null;
  public synchronized int get() { return n; }
  public void set(int v) { l.lock(); n = v; l.unlock(); }
}
"""
    )
    alerts = check_correct_synchronization(cm)
    # (write,read) and (write,write): disjoint nonempty monitor sets alert once each
    assert rules_of(alerts) == ["P3"]
    assert "no common monitor" in alerts[0].message


def test_shared_monitor_across_sync_forms_is_ok():
    cm = model_from_source(
        """@ThreadSafe
class OK {
  private int n = 0;
  public synchronized int get() { return n; }
  public void set(int v) { synchronized (this) { n = v; } }
}
"""
    )
    assert check_correct_synchronization(cm) == []


def test_no_public_access_path_message():
    cm = model_from_source(
        """@ThreadSafe
class NP {
  private int n = 0;
  private void hidden(int v) { n = v; }
  public int get() { return n; }
}
"""
    )
    alerts = check_correct_synchronization(cm)
    assert alerts and all("no public access path" in a.message for a in alerts)


def test_dead_private_state_produces_no_alert():
    cm = model_from_source(
        """@ThreadSafe
class Dead {
  private int n = 0;
  private int unusedRead() { return n; }
}
"""
    )
    # the read is never part of a conflict (no modifying access), so silence
    assert check_correct_synchronization(cm) == []


# --- analyze_class ---


def test_counter_dr_full_tally():
    alerts = analyze_class(model_for("CounterDR.java"))
    assert sorted(rules_of(alerts)) == ["P1", "P3", "P3"]


def test_counter_ts_clean():
    assert analyze_class(model_for("CounterTS.java")) == []


def test_test_class_tally():
    alerts = analyze_class(model_for("Test.java"))
    assert rules_of(alerts) == ["P2"]
    assert alerts[0].field == "lock"


def test_unannotated_class_ignored():
    cm = model_for("NotAnnotated.java")
    assert analyze_class(cm) == []


def test_rule_filtering():
    cm = model_for("CounterDR.java")
    full = analyze_class(cm)
    only_p1 = analyze_class(cm, rules=("P1",))
    assert only_p1 == [a for a in full if a.rule == "P1"]
    only_p3 = analyze_class(cm, rules=("P3",))
    assert only_p3 == [a for a in full if a.rule == "P3"]


def test_alerts_sorted_and_deterministic():
    cm1 = model_for("CounterDR.java")
    cm2 = model_for("CounterDR.java")
    a1 = analyze_class(cm1)
    a2 = analyze_class(cm2)
    assert a1 == a2
    keys = [a.sort_key() for a in a1]
    assert keys == sorted(keys)


def test_adding_unsynchronized_writer_does_not_decrease_p3():
    base = """@ThreadSafe
class Mono {{
  private int n = 0;
  public synchronized int get() {{ return n; }}
  public synchronized void set(int v) {{ n = v; }}
  {extra}
}}
"""
    before = analyze_class(model_from_source(base.format(extra="")))
    after = analyze_class(
        model_from_source(base.format(extra="public void raw(int v) { n = v; }"))
    )
    p3 = lambda alerts: sum(1 for a in alerts if a.rule == "P3")
    assert p3(after) >= p3(before)
    assert p3(after) > 0


def test_try_finally_lock_idiom_is_clean():
    assert analyze_class(model_for("TryFinally.java")) == []


def test_sync_blocks_fixture_clean():
    assert analyze_class(model_for("SyncBlocks.java")) == []


def test_mixed_fixture_clean():
    assert analyze_class(model_for("Mixed.java")) == []


def test_unguarded_fixture_alerts():
    alerts = analyze_class(model_for("Unguarded.java"))
    assert all(a.rule == "P3" and a.field == "counter" for a in alerts)
    assert len(alerts) == 4  # (w, r-rhs), (w, w), (w, r-return), (w, r-peek)
