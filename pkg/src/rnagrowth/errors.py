"""Exception hierarchy shared by the library and the command line."""


class RNAGrowthError(Exception):
    """Base class for all errors raised by this package."""


class OrderMismatchError(RNAGrowthError, ValueError):
    pass


class PolynomialError(RNAGrowthError, ValueError):
    pass


class DegenerateSystemError(RNAGrowthError):
    pass


class ModelLookupError(RNAGrowthError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else ""


class ModelError(RNAGrowthError, ValueError):
    """A model is malformed or violates one of its invariants."""


class BranchAmbiguityError(ModelError):
    pass


class ModelInconsistencyError(ModelError):
    pass


class ResourceLimitError(RNAGrowthError):
    pass


class ConvergenceError(RNAGrowthError):
    """Root iteration did not converge; carries the best iterate."""

    def __init__(self, message, roots=None, residual=None):
        super().__init__(message)
        self.roots = roots
        self.residual = residual


class StrategyError(RNAGrowthError):
    pass


class InsufficientDataError(RNAGrowthError, ValueError):
    pass
