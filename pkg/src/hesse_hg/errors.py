"""Exception hierarchy shared by all modules."""


class HesseError(Exception):
    """Base class for every error raised by this package."""


class ParameterError(HesseError, ValueError):
    """Parameters are resonant or hit a pole of a Gamma factor."""

    def __init__(self, message, violations=None):
        super().__init__(message)
        self.violations = list(violations or [])


class DomainError(HesseError, ValueError):
    """A point lies outside the convergence domain of the series."""


class BranchError(HesseError, ValueError):
    """A power prefactor is evaluated on its branch cut without an explicit branch."""


class PoleError(ParameterError):
    """A Gamma factor is evaluated at a pole."""


class ResourceLimitError(HesseError, RuntimeError):
    """A Groebner basis computation exceeded its step cap."""


class ReductionError(HesseError, RuntimeError):
    """Normal-form reduction produced a non-standard monomial."""


class RootError(HesseError, ValueError):
    """No real root found where one is required."""


class ClearanceError(HesseError, ValueError):
    """A path comes too close to the singular locus."""


class SingularMatrixError(HesseError, ValueError):
    """A fundamental matrix is numerically singular."""


class StepError(HesseError, RuntimeError):
    """The ODE step-size controller stalled."""


class ClusterError(HesseError, ValueError):
    """Eigenvalues fail to separate into the expected clusters."""


class EigenError(ClusterError):
    """The expected simple eigenvalue could not be isolated."""


class ZeroEntryError(HesseError, ValueError):
    """An eigenvector has a (numerically) vanishing entry."""
