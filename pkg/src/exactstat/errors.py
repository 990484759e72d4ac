"""Exception types shared across the package."""


class ConsistencyError(ArithmeticError):
    """An exact identity that must hold did not (e.g. a non-integral division)."""


class BudgetExceeded(RuntimeError):
    """The brute-force enumerator visited more nodes than it was allowed."""


class ConvergenceError(ArithmeticError):
    """A numeric series hit its term cap before converging."""
