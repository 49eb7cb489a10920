"""Exception hierarchy.

Every error raised by the library derives from :class:`PeriodsError`.  The
CLI maps the two middle layers onto exit codes: :class:`ConfigError` is a
usage/config problem (exit 2), :class:`MathPreconditionError` means the
inputs are well formed but the requested quantity does not exist (exit 3).
"""

from __future__ import annotations


class PeriodsError(Exception):
    """Base class for all library errors."""


class ConfigError(PeriodsError):
    """Malformed or inconsistent input data."""

    def __init__(self, message: str, path: str = ""):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


class SchemaError(ConfigError):
    pass


class InvariantViolation(ConfigError):
    pass


class EmptyParams(ConfigError):
    pass


class RankViolation(ConfigError):
    pass


class RankMismatch(ConfigError):
    pass


class FieldMismatch(ConfigError):
    pass


class OddRank(ConfigError):
    pass


class EvenRank(ConfigError):
    pass


class OrderMismatch(PeriodsError):
    pass


class NegativeOrder(PeriodsError):
    pass


class TooLarge(PeriodsError):
    pass


class InsufficientGrid(PeriodsError):
    pass


class NotDominant(PeriodsError):
    """Raised by :func:`partitions.interleave`; callers treat the term as zero."""


class MathPreconditionError(PeriodsError):
    pass


class ZeroConstantTerm(MathPreconditionError):
    pass


class PoleAtEvaluationPoint(MathPreconditionError):
    pass


class PoleAtSpecialPoint(PoleAtEvaluationPoint):
    def __init__(self, message: str, factor=None):
        self.factor = factor
        super().__init__(message)


class RepeatedParameter(MathPreconditionError):
    pass


class ConvergenceViolation(MathPreconditionError):
    pass
