"""Analyzer configuration: defaults, config-file parsing, CLI merging.

Config files are line-oriented ``key = value[,value...]`` text; '#' starts a
comment. A key given in the file replaces the default list wholesale; the
``--*-add`` command-line flags extend instead. THREADLINT_CONFIG names a
default config file path.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Optional

from threadlint.alerts import ALL_RULES
from threadlint.classmodel import (
    DEFAULT_ALLOWLIST_PREFIXES,
    DEFAULT_MUTATOR_METHODS,
    ThreadSafeTypeAllowlist,
)
from threadlint.errors import ConfigError
from threadlint.frontend import DEFAULT_ANNOTATIONS
from threadlint.monitors import (
    DEFAULT_LOCK_METHODS,
    DEFAULT_LOCK_TYPES,
    DEFAULT_UNLOCK_METHODS,
)

OUTPUT_FORMATS = ("text", "json", "sarif")

ENV_CONFIG_PATH = "THREADLINT_CONFIG"


@dataclass(frozen=True)
class Config:
    annotations: tuple[str, ...] = DEFAULT_ANNOTATIONS
    allowlist_prefixes: tuple[str, ...] = DEFAULT_ALLOWLIST_PREFIXES
    allowlist_types: tuple[str, ...] = ()
    lock_types: tuple[str, ...] = DEFAULT_LOCK_TYPES
    lock_methods: tuple[str, ...] = DEFAULT_LOCK_METHODS
    unlock_methods: tuple[str, ...] = DEFAULT_UNLOCK_METHODS
    mutator_methods: tuple[str, ...] = DEFAULT_MUTATOR_METHODS
    rules: tuple[str, ...] = ALL_RULES
    output_format: str = "text"

    def __post_init__(self):
        if not self.rules:
            raise ConfigError("rules must be a nonempty subset of P1, P2, P3")
        for r in self.rules:
            if r not in ALL_RULES:
                raise ConfigError(f"unknown rule {r!r}; expected one of {', '.join(ALL_RULES)}")
        if self.output_format not in OUTPUT_FORMATS:
            raise ConfigError(
                f"unknown output format {self.output_format!r}; expected one of {', '.join(OUTPUT_FORMATS)}"
            )

    def allowlist(self) -> ThreadSafeTypeAllowlist:
        return ThreadSafeTypeAllowlist(self.allowlist_prefixes, self.allowlist_types)


_LIST_KEYS = {
    "annotations": "annotations",
    "allowlist_prefixes": "allowlist_prefixes",
    "allowlist_types": "allowlist_types",
    "lock_types": "lock_types",
    "lock_methods": "lock_methods",
    "unlock_methods": "unlock_methods",
    "mutator_methods": "mutator_methods",
    "rules": "rules",
}


def parse_config_text(text: str, path: str = "<config>") -> dict:
    """Parse ``key = value[,value...]`` lines into Config field overrides."""
    overrides: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        values = tuple(v.strip() for v in value.split(",") if v.strip())
        if key == "format":
            if len(values) != 1:
                raise ConfigError(f"{path}:{lineno}: format takes exactly one value")
            overrides["output_format"] = values[0]
        elif key in _LIST_KEYS:
            if not values:
                raise ConfigError(f"{path}:{lineno}: {key} needs at least one value")
            overrides[_LIST_KEYS[key]] = values
        else:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
    return overrides


def load_config_file(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return parse_config_text(fh.read(), path)
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc.strerror or exc}")


def build_config(
    file_path: Optional[str] = None,
    *,
    rules: Optional[tuple[str, ...]] = None,
    output_format: Optional[str] = None,
    allowlist_add: tuple[str, ...] = (),
    lock_type_add: tuple[str, ...] = (),
    annotation_add: tuple[str, ...] = (),
    mutator_add: tuple[str, ...] = (),
) -> Config:
    """Defaults, overridden by the config file, extended by CLI flags.

    ``--allowlist-add`` entries ending in '.' are package prefixes; the rest
    are exact type names.
    """
    overrides = load_config_file(file_path) if file_path else {}
    cfg = Config(**overrides)
    if rules:
        cfg = replace(cfg, rules=tuple(dict.fromkeys(rules)))
    if output_format:
        cfg = replace(cfg, output_format=output_format)
    if annotation_add:
        cfg = replace(cfg, annotations=cfg.annotations + tuple(annotation_add))
    if lock_type_add:
        cfg = replace(cfg, lock_types=cfg.lock_types + tuple(lock_type_add))
    if mutator_add:
        cfg = replace(cfg, mutator_methods=cfg.mutator_methods + tuple(mutator_add))
    if allowlist_add:
        prefixes = tuple(e for e in allowlist_add if e.endswith("."))
        exact = tuple(e for e in allowlist_add if not e.endswith("."))
        cfg = replace(
            cfg,
            allowlist_prefixes=cfg.allowlist_prefixes + prefixes,
            allowlist_types=cfg.allowlist_types + exact,
        )
    return cfg
