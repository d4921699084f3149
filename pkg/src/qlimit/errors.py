"""Exception hierarchy shared across the engine."""


class QLimitError(Exception):
    pass


class DivisionByZero(QLimitError, ZeroDivisionError):
    pass


class EvaluationPole(QLimitError, ArithmeticError):
    pass


class ContextMismatch(QLimitError, ValueError):
    pass


class OrientationError(QLimitError, ValueError):
    pass


class MorphismDomainError(QLimitError, KeyError):
    pass


class SectionsUnavailable(QLimitError):
    pass


class CoherenceError(QLimitError, ValueError):
    pass


class NotARepresentation(QLimitError, ValueError):
    pass


class UnknownGenerator(QLimitError, NameError):
    pass


class ParseError(QLimitError, SyntaxError):
    """Syntax error in an expression, carrying a 1-based line and column."""

    def __init__(self, message, line=1, column=1, text=None):
        self.message = message
        self.line = line
        self.column = column
        super().__init__(f"{message} (line {line}, column {column})")
