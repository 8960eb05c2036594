"""Exception hierarchy shared by all modules.

Two families matter to callers: :class:`DomainError` (bad input, bad
configuration, mathematically invalid request) and :class:`NumericalError`
(an algorithm failed on valid input). The command-line front end maps them
to exit codes 1 and 2 respectively.
"""


class SzegoError(Exception):
    """Base class for every error raised by this package."""


class DomainError(SzegoError, ValueError):
    """Invalid input or configuration."""


class ParseError(DomainError):
    """Syntax error in an expression, carrying the character offset."""

    def __init__(self, message, position=None, source=None):
        self.position = position
        self.source = source
        if position is not None:
            message = f"{message} at offset {position}"
        super().__init__(message)


class EvaluationError(DomainError):
    """Unbound variable or mathematical domain violation during evaluation."""

    def __init__(self, message, node=None):
        self.node = node
        super().__init__(message)


class ConfigError(DomainError):
    pass


class NumericalError(SzegoError, ArithmeticError):
    """An algorithm failed to deliver a result of the promised accuracy."""


class DegenerateWeightError(NumericalError):
    pass


class HermiticityError(DomainError):
    pass
