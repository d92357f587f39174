"""Exception hierarchy shared by all qinterval modules."""


class QIntervalError(Exception):
    """Base class for errors raised by qinterval."""


class DomainError(QIntervalError, ValueError):
    """An argument lies outside the domain of the requested quantity."""


class PreconditionError(QIntervalError, ValueError):
    """Arguments are individually valid but violate an operation's precondition."""


class ToleranceUnreachable(QIntervalError):
    """A certified result cannot be produced within the configured term budget.

    Raised instead of silently returning an uncertified value, typically when
    ``q`` is so close to 1 that the tail of the series needs more terms than
    the hard cap allows.
    """

    def __init__(self, msg, required_terms=None):
        super().__init__(msg)
        self.required_terms = required_terms


class SizeCapError(QIntervalError, ValueError):
    """An exhaustive routine was asked to enumerate more than it is allowed to."""
