"""Exception types shared across the analyzer and the trace oracle."""

from __future__ import annotations


class ThreadlintError(Exception):
    """Base class for all threadlint errors."""


class ParseError(ThreadlintError):
    """Syntax outside the supported Java subset, or malformed input."""

    def __init__(self, line: int, col: int, message: str):
        super().__init__(f"{line}:{col}: {message}")
        self.line = line
        self.col = col
        self.message = message


class SpanOutOfRange(ThreadlintError):
    """A source span does not lie within the file it claims to come from."""


class UnreachableNodeError(ThreadlintError):
    """Dominance query on a node not reachable from entry (or not reaching exit)."""


class MalformedExecution(ThreadlintError):
    """A trace violates per-thread program order or monitor mutual exclusion."""


class BudgetExceeded(ThreadlintError):
    """Interleaving enumeration would exceed the configured budget."""


class UnsupportedForOracle(ThreadlintError):
    """Class shape the trace oracle cannot model (e.g. branching method bodies)."""


class ConfigError(ThreadlintError):
    """Malformed configuration file or invalid option value."""


class IoError(ThreadlintError):
    """Missing or unreadable input path."""
