"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of the function."""


class PoleError(DomainError):
    """Evaluation at a pole of the function."""


class IntegrandError(ArithmeticError):
    """The integrand returned NaN at a quadrature node."""


class ConvergenceError(ArithmeticError):
    """A quadrature or acceleration scheme failed to reach its tolerance.

    The partial result (with ``converged=False``) is kept on ``result`` so
    callers can inspect what was computed before giving up.
    """

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result
