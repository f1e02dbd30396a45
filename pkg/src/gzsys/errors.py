"""Exception hierarchy shared by all modules."""


class GZError(Exception):
    """Base class for library errors."""


class PreconditionError(GZError, ValueError):
    """An argument violates a documented precondition (shape, index, domain)."""


class ConvergenceError(GZError, ArithmeticError):
    """An iterative method did not converge within its iteration budget."""


class NumericalError(GZError, ArithmeticError):
    """A computation overflowed or produced non-finite values."""


class ConsistencyError(GZError):
    """Independent computations that must agree did not."""
