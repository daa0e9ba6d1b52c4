"""Exception hierarchy shared by every module."""

from __future__ import annotations


class NullFDError(Exception):
    """Base class for all errors raised by nullfd."""


class SchemaError(NullFDError):
    """Unknown attribute, arity mismatch or a marker in a non-nullable column."""


class NullPresentError(NullFDError):
    """Raised by the classical checker when a relevant column holds a null marker."""


class SizeGuardError(NullFDError):
    """The possible-worlds enumeration would exceed the configured cap."""


class PreconditionFailed(NullFDError):
    """An operation was invoked on data that does not meet its requirements.

    ``violations`` carries whatever evidence the caller can use to explain
    the refusal (Violation objects, 1RHS report entries, ...).
    """

    def __init__(self, message: str, violations=()):
        super().__init__(message)
        self.violations = list(violations)


class InitialViolation(PreconditionFailed):
    """An indexed relation was built over data that already violates its FDs."""


class FDSyntaxError(NullFDError):
    def __init__(self, message: str, line: int | None = None, path: str | None = None):
        where = ""
        if path is not None:
            where = f"{path}:"
        if line is not None:
            where += f"{line}: "
        elif where:
            where += " "
        super().__init__(where + message)
        self.line = line
        self.path = path
