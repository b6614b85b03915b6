"""Exception hierarchy shared across the package.

Every error a caller might want to catch programmatically has its own
class; configuration problems and teaching-time failures are kept
separate because the CLI maps them to different exit codes.
"""


class IterTeachError(Exception):
    """Base class for all package-specific errors."""


class DimensionError(IterTeachError, ValueError):
    """Operands have incompatible shapes or dimensions."""


class LabelDomainError(IterTeachError, ValueError):
    """A label is outside the domain required by the loss."""


class NumericOverflowError(IterTeachError, ArithmeticError):
    """An update produced a non-finite value."""


class EmptyPoolError(IterTeachError, ValueError):
    """A selection operation was asked to scan an empty candidate pool."""


class SpanViolationError(IterTeachError, ValueError):
    """The target direction is not in the span of the candidate pool."""


class NormBoundError(IterTeachError, ValueError):
    """A teacher precondition on a parameter norm is violated."""


class ConfigError(IterTeachError, ValueError):
    """An experiment configuration is missing or inconsistent."""


class DataFormatError(IterTeachError, ValueError):
    """An external data file could not be parsed."""
