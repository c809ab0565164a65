"""
Exception types raised by bicrates.

Verification findings (falsified conditions, failed containment, gaps above
half a bit) are never raised; they come back as report objects.
"""


class BicratesError(Exception):
    """Base class for every error raised by the package."""


class ValidationError(BicratesError, ValueError):
    """Bad argument, unknown variable, malformed or non-normalized table."""


class PreconditionError(ValidationError):
    """A capacity evaluator or certificate was asked for outside its regime."""

    def __init__(self, message, violated=None):
        super().__init__(message)
        self.violated = violated or message


class InfeasibleError(BicratesError):
    """The linear system has an empty feasible set."""


class UnboundedError(BicratesError):
    """The linear system is unbounded along ``direction``."""

    def __init__(self, message, direction=None):
        super().__init__(message)
        self.direction = direction or {}
