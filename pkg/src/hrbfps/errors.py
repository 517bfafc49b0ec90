"""Exception types raised by the solvers and the optimizer."""


class ConditioningError(ArithmeticError):
    """A factorization met a matrix that is singular to working precision.

    Attributes
    ----------
    condition : float
        Estimated condition number of the offending matrix (``inf`` when a
        pivot is exactly zero).
    index : int or None
        Node index involved, when the failure is tied to one (leave-one-out
        subsystems, zero diagonal entries of the inverse).
    """

    def __init__(self, message, condition=float("inf"), index=None):
        super().__init__(message)
        self.condition = condition
        self.index = index


class DiagnosticError(RuntimeError):
    """An eigen- or singular-value routine failed to converge."""


class OptimizationError(RuntimeError):
    """The particle swarm could not produce a single finite fitness value."""
