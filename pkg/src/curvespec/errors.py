"""Exception and warning types shared across the package.

The CLI maps these onto exit codes: ParameterError -> 2, NumericalError -> 3,
GeometryError -> 4.
"""


class ParameterError(ValueError):
    """An argument violates a documented precondition."""


class GeometryError(ValueError):
    """A geometric quantity is inadmissible (Jacobian sign, focal point,
    volume too large, curvature-thickness bound, ...)."""


class NumericalError(RuntimeError):
    """An iterative or linear-algebra routine failed to produce a usable
    result (NaN in a line search, eigensolver breakdown, ...)."""


class ConvergenceError(NumericalError):
    """An iteration hit its budget before reaching tolerance.

    Carries the last achieved value of the quantity being driven to zero.
    """

    def __init__(self, message, last_value=None):
        super().__init__(message)
        self.last_value = last_value


class DegeneracyWarning(UserWarning):
    """The spectral gap above the ground state is too small for a
    perturbation-theory formula to be trustworthy."""
