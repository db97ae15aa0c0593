"""Exception hierarchy shared by every module."""


class ConfSolitonError(Exception):
    """Base class for all errors raised by the package."""


class ContractViolation(ConfSolitonError, ValueError):
    pass


class ExprSyntaxError(ConfSolitonError):
    """Malformed expression.

    ``offset`` is the 1-based byte position where parsing stopped and
    ``expected`` the set of tokens that would have been accepted there.
    """

    def __init__(self, offset, expected, source=""):
        self.offset = offset
        self.expected = tuple(sorted(expected))
        self.source = source
        super().__init__(
            f"syntax error at offset {offset}: expected one of {', '.join(self.expected)}"
        )


class UnknownIdentifier(ConfSolitonError):
    def __init__(self, name, offset=None):
        self.name = name
        self.offset = offset
        where = f" at offset {offset}" if offset is not None else ""
        super().__init__(f"unknown identifier {name!r}{where}")


class DomainError(ConfSolitonError, ArithmeticError):
    """Expression evaluated outside the domain of one of its functions."""


class OutOfDomain(ConfSolitonError):
    def __init__(self, point, reason="outside parameter box"):
        self.point = tuple(float(p) for p in point)
        self.reason = reason
        super().__init__(f"point {self.point} not admissible: {reason}")


class NullNormal(ConfSolitonError):
    """The normal direction is lightlike (degenerate hypersurface point)."""


class DegenerateMetric(ConfSolitonError):
    """Induced metric is (numerically) singular."""


class UnsupportedIndex(ConfSolitonError):
    pass


class EmptyGrid(ConfSolitonError):
    pass


class ZeroRadius(ConfSolitonError):
    pass


class NotApplicable(ConfSolitonError):
    """An operation's precondition does not hold at the given point."""


class ConfigError(ConfSolitonError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        loc = ""
        if line is not None:
            loc = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(loc + message)


# Errors that mark a single sample point as unusable without aborting a run.
POINT_ERRORS = (DomainError, OutOfDomain, NullNormal, DegenerateMetric, ZeroRadius)
