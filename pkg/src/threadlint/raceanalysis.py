"""Conflicting access pairs and the P3 rule, plus per-class rule aggregation.

Two exposed accesses of the same field conflict when at least one modifies
the field; a pair may be one access against itself, since two threads can
execute the same statement. Alert granularity is per conflicting pair, so an
unprotected, frequently-accessed field yields many alerts.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from threadlint.alerts import (
    ALL_RULES,
    Alert,
    RULE_CORRECT_SYNCHRONIZATION,
)
from threadlint.accesspaths import AccessPathFact, provides_access
from threadlint.cfg import Cfg, DomInfo
from threadlint.classmodel import (
    ClassModel,
    FieldAccess,
    check_no_escaping,
    check_safe_publication,
    exposed_accesses,
    is_modifying,
)
from threadlint.monitors import (
    DEFAULT_LOCK_METHODS,
    DEFAULT_LOCK_TYPES,
    DEFAULT_UNLOCK_METHODS,
    MonitorAnalysis,
)


@dataclass(eq=False)
class ConflictPair:
    """Two exposed accesses of one field, the modifying one first (a may be b)."""

    a: FieldAccess
    b: FieldAccess

    def __post_init__(self):
        assert self.a.field is self.b.field
        assert is_modifying(self.a)


def conflicting_pairs(cm: ClassModel, exposed: Optional[list[FieldAccess]] = None) -> list[ConflictPair]:
    """All conflicting pairs over exposed accesses, deduplicated.

    (a, b) and (b, a) appear once, modifying access first; self-pairs (w, w)
    are included. Volatile fields never appear: their accesses are not exposed.
    """
    if exposed is None:
        exposed = exposed_accesses(cm)
    by_field: dict[int, list[FieldAccess]] = {}
    for a in exposed:
        by_field.setdefault(id(a.field), []).append(a)
    pairs: list[ConflictPair] = []
    for accesses in by_field.values():
        for i, x in enumerate(accesses):
            for y in accesses[i:]:
                if is_modifying(x):
                    pairs.append(ConflictPair(x, y))
                elif is_modifying(y):
                    pairs.append(ConflictPair(y, x))
    return pairs


def check_correct_synchronization(
    cm: ClassModel,
    facts: Optional[frozenset[AccessPathFact]] = None,
    monitor_info: Optional[MonitorAnalysis] = None,
) -> list[Alert]:
    """P3: every conflicting pair must share at least one protecting monitor."""
    if monitor_info is None:
        if facts is None:
            facts = provides_access(cm)
        monitor_info = MonitorAnalysis(cm, facts)
    alerts = []
    for pair in conflicting_pairs(cm):
        ma = monitor_info.monitors(pair.a)
        mb = monitor_info.monitors(pair.b)
        if ma & mb:
            continue
        notes = []
        for acc, mons in ((pair.a, ma), (pair.b, mb)):
            if not mons and not monitor_info.public_facts(acc):
                notes.append(f"no public access path to the {acc.kind.value} at line {acc.line}")
        if notes:
            detail = "; ".join(dict.fromkeys(notes))
        else:
            detail = "no common monitor guards both accesses"
        message = (
            f"conflicting accesses to field '{pair.a.field.name}' "
            f"({pair.a.kind.value} at line {pair.a.line}, {pair.b.kind.value} at line {pair.b.line}): {detail}"
        )
        alerts.append(
            Alert(
                rule=RULE_CORRECT_SYNCHRONIZATION,
                primary=pair.a.span,
                secondary=pair.b.span,
                field=pair.a.field.name,
                message=message,
                class_id=cm.class_id,
            )
        )
    alerts.sort(key=Alert.sort_key)
    return alerts


def analyze_class(
    cm: ClassModel,
    cfgs: Optional[dict[int, tuple[Cfg, DomInfo]]] = None,
    rules: tuple[str, ...] = ALL_RULES,
    lock_types: tuple[str, ...] = DEFAULT_LOCK_TYPES,
    lock_methods: tuple[str, ...] = DEFAULT_LOCK_METHODS,
    unlock_methods: tuple[str, ...] = DEFAULT_UNLOCK_METHODS,
) -> list[Alert]:
    """P1 + P2 + P3 for one class, stably sorted by location.

    Classes without the thread-safe annotation produce no alerts.
    """
    if not cm.annotated:
        return []
    alerts: list[Alert] = []
    if "P1" in rules:
        alerts.extend(check_no_escaping(cm))
    if "P2" in rules:
        alerts.extend(check_safe_publication(cm))
    if "P3" in rules:
        facts = provides_access(cm)
        info = MonitorAnalysis(
            cm, facts, cfgs,
            lock_types=lock_types,
            lock_methods=lock_methods,
            unlock_methods=unlock_methods,
        )
        alerts.extend(check_correct_synchronization(cm, facts, info))
    alerts.sort(key=Alert.sort_key)
    return alerts
