"""Exception types raised across the package."""


class SwitchRegError(Exception):
    """Base class for all package errors."""


class ValidationError(SwitchRegError, ValueError):
    """Invalid input data: shapes, ranges, problem files."""


class InvalidModeError(ValidationError):
    pass


class DomainError(ValidationError):
    """Regularizer argument outside [0, 1] beyond tolerance."""


class RegularizerError(ValidationError):
    """A regularizer failed the discreteness assumption check."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class NotDiscreteError(SwitchRegError, ValueError):
    def __init__(self, step, residual, tol):
        super().__init__(
            f"control at step {step} is not discrete: residual {residual:.3g} > tol {tol:.3g}"
        )
        self.step = step
        self.residual = residual
        self.tol = tol


class SolverError(SwitchRegError, RuntimeError):
    pass


class MpcError(SolverError):
    """Raised when the solver fails mid-loop; carries the partial trace."""

    def __init__(self, message, step, trace):
        super().__init__(message)
        self.step = step
        self.trace = trace


class BudgetError(SwitchRegError):
    def __init__(self, required, max_evals):
        super().__init__(
            f"enumeration needs {required} evaluations, budget is {max_evals}"
        )
        self.required = required
        self.max_evals = max_evals
