class FracLatticeError(Exception):
    """
    Base class for all application exceptions.

    `outputs` lists data files already written when the error was raised; the runner
    still gives them a manifest.
    """
    exit_code = 1

    def __init__(self, *args, outputs=None, diagnostics=None):
        super().__init__(*args)
        self.outputs = list(outputs or [])
        self.diagnostics = dict(diagnostics or {})

class InvalidInputError(FracLatticeError):
    """
    Base for errors caused by arguments outside an operation's domain.
    The CLI reports these with exit code 2.
    """
    exit_code = 2

class DomainError(InvalidInputError):
    """Parameter outside the admissible range (alpha <= 0, beta <= 1, index out of range, ...)."""

class PoleError(InvalidInputError):
    """Gamma function evaluated at one of its poles 0, -1, -2, ..."""

class DimensionMismatch(InvalidInputError):
    """Field, index or wave vector length does not match the lattice."""

class SingularityError(InvalidInputError):
    """Kernel evaluated on its singular set (x = 0 mod L)."""

class ToleranceError(FracLatticeError):
    """
    Base for numerical results that could not be certified.
    The CLI reports these with exit code 3.
    """
    exit_code = 3

class ToleranceNotMet(ToleranceError):
    """A cross-check residual exceeded its bound."""

class QuadratureNonConvergence(ToleranceError):
    """Adaptive quadrature stopped before reaching its tolerance."""

class ResourceLimit(FracLatticeError):
    """
    Requested problem size exceeds a configured cap (site count, dimension).
    The CLI reports these with exit code 4.
    """
    exit_code = 4

# Reported as a status string by the convergence checks, never raised.
NON_MONOTONE_CONVERGENCE = "NonMonotoneConvergence"
