"""Exception types shared across the package."""


class NumericalError(ArithmeticError):
    """A float computation produced a non-finite value."""


class SingularityError(NumericalError):
    """A negative-power term was evaluated too close to its pole."""


class NotSeparableError(ValueError):
    """Raised when an operation needs f(q1+q2) + g(q1-q2) form and U has none."""

    def __init__(self, message, obstruction=()):
        super().__init__(message)
        self.obstruction = tuple(obstruction)


class DegenerateFitError(NumericalError):
    """Normal equations of a least-squares fit are singular."""


class ParseError(ValueError):
    """Syntax error in a potential expression.

    ``position`` is a character offset into the input; ``len(text)`` denotes
    end of input.
    """

    def __init__(self, position, expected, found, text=None):
        self.position = position
        self.expected = expected
        self.found = found
        self.text = text
        super().__init__(f"at offset {position}: expected {expected}, found {found!r}")


class ZeroDenominatorError(ParseError):
    """A rational literal such as ``1/0``."""

    def __init__(self, position, found, text=None):
        super().__init__(position, "nonzero denominator", found, text)
