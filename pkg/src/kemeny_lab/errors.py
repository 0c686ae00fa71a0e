"""Exception hierarchy shared by every kemeny_lab module."""


class KemenyLabError(Exception):
    """Base class for all library errors."""


class DimensionMismatch(KemenyLabError, ValueError):
    pass


class SingularMatrix(KemenyLabError, ArithmeticError):
    pass


class SingularSystem(KemenyLabError, ArithmeticError):
    """A system that should be uniquely solvable was not (numerical breakdown)."""


class UnsupportedInMode(KemenyLabError):
    pass


class NoConvergence(KemenyLabError):
    pass


class NotStochastic(KemenyLabError, ValueError):
    def __init__(self, row, reason):
        self.row = row
        self.reason = reason
        super().__init__(f"row {row}: {reason}")


class NotRegular(KemenyLabError):
    """The chain has no strictly positive power within the Wielandt bound."""


class NotPrimitive(NotRegular):
    pass


class SpectrumInvalid(KemenyLabError, ValueError):
    pass


class CensoringExceeded(KemenyLabError):
    def __init__(self, start, target, censored, trials):
        self.start = start
        self.target = target
        self.censored = censored
        self.trials = trials
        super().__init__(
            f"{censored} of {trials} walks from {start} to {target} hit max_steps"
        )


class ParseError(KemenyLabError, ValueError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)
