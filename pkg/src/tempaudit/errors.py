"""Exception and warning types raised across the package."""


class AuditError(Exception):
    """Base class for every error raised by tempaudit."""


class InvariantViolation(AuditError, ValueError):
    """A domain object was built from data breaking one of its invariants."""


class LengthMismatch(AuditError, ValueError):
    pass


class IndexOutOfRange(AuditError, IndexError):
    pass


class EmptyMatrix(AuditError, ValueError):
    pass


class ZeroMarginal(AuditError, ZeroDivisionError):
    """A probability needed a marginal that has no mass."""


class SameLabel(AuditError, ValueError):
    pass


class ShapeMismatch(AuditError, ValueError):
    pass


class ThresholdMismatch(AuditError, ValueError):
    pass


class DegenerateJoint(AuditError, ValueError):
    """Every supported row of a confident joint is empty, so no joint can be formed."""


class OutOfRange(AuditError, ValueError):
    pass


class MissingTruth(AuditError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else "missing truth"


class SeriesTooShort(AuditError, ValueError):
    pass


class FrameMismatch(AuditError, ValueError):
    pass


class HypothesisUnmet(AuditError, ValueError):
    pass


class InvalidConfig(AuditError, ValueError):
    pass


class ParseError(AuditError, ValueError):
    """Malformed input file. Carries the 1-based line and column when known."""

    def __init__(self, message, path=None, line=None, column=None):
        self.path = path
        self.line = line
        self.column = column
        where = []
        if path is not None:
            where.append(str(path))
        if line is not None:
            where.append(f"line {line}")
        if column is not None:
            where.append(f"column {column}")
        super().__init__(f"{', '.join(where)}: {message}" if where else message)


class DegenerateRowWarning(UserWarning):
    """A class with noisy-label support has no confidently counted examples."""
