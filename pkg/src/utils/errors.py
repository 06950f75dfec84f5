"""
Error types shared across the circle-method toolkit.

Every domain error derives from ``CircleMethodError`` and from the builtin
exception it specializes, so callers can catch either family.
"""

from enum import Enum
from typing import Any, Dict, Optional


class ExitCode(Enum):
    """Process exit codes used by the command line."""
    SUCCESS = 0
    VERIFICATION_FAILED = 1
    USAGE = 2


class CircleMethodError(Exception):
    """Base class for toolkit errors."""

    def __init__(self, message: str, **context: Any):
        super().__init__(message)
        self.message = message
        self.context: Dict[str, Any] = {k: v for k, v in context.items() if v is not None}

    def __str__(self) -> str:
        if not self.context:
            return self.message
        details = ", ".join(f"{key}={value}" for key, value in self.context.items())
        return f"{self.message} ({details})"


class DomainError(CircleMethodError, ValueError):
    """An argument lies outside the domain of an operation."""


class RegistryLookupError(CircleMethodError, KeyError):
    """Unknown generating function or formula name."""

    def __str__(self) -> str:
        # KeyError would quote the message otherwise
        return CircleMethodError.__str__(self)


class FormulaParseError(CircleMethodError, ValueError):
    """Malformed formula or spec JSON."""

    def __init__(
        self,
        message: str,
        line: Optional[int] = None,
        column: Optional[int] = None,
        path: Optional[str] = None,
    ):
        super().__init__(message, line=line, column=column, path=path)
        self.line = line
        self.column = column
        self.path = path


class FormulaEvaluationError(CircleMethodError, ArithmeticError):
    """A kernel or expression failed while evaluating a formula."""


class ConjectureError(CircleMethodError):
    """The case analysis cannot produce a formula."""


class UnsupportedSpecError(ConjectureError):
    """The generating function lies outside the supported class."""


class VerificationError(CircleMethodError):
    """Formula evaluation failed inside the verification harness."""
