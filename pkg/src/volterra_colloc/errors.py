"""Exception hierarchy shared by the solver modules."""


class VolterraError(Exception):
    """Base class for all errors raised by this package."""


class ParameterError(VolterraError, ValueError):
    pass


class DomainError(VolterraError, ValueError):
    pass


class DegenerateDiagonalError(VolterraError):
    """The last kernel branch vanishes (or nearly so) on the diagonal."""


class ModelError(VolterraError):
    pass


class ConfigError(VolterraError):
    pass


class EvaluationError(VolterraError, ArithmeticError):
    """A user function returned NaN or infinity.

    ``abscissa`` holds the offending argument.
    """

    def __init__(self, message, abscissa=None):
        super().__init__(message)
        self.abscissa = abscissa


class SingularSystemError(VolterraError, ArithmeticError):
    pass


class UnreliableDivisionError(VolterraError, ArithmeticError):
    """Division by a stochastic value that is an informatical zero."""
