"""Exception types raised by the library."""


class AdiabaticError(Exception):
    """Base class for all errors raised by adia_tradeoff."""


class DegenerateGroundGap(AdiabaticError):
    """The instantaneous ground gap fell below the degeneracy threshold."""


class DegenerateBlockCoupling(AdiabaticError):
    """Two quasi-degenerate levels carry a non-negligible drive coupling.

    Levels closer than the degeneracy threshold are only supported when
    the drive does not couple them (the coupling is then set to zero
    after verification); anything else needs degenerate perturbation
    theory, which is out of scope.
    """


class QuadratureFailure(AdiabaticError):
    """Adaptive quadrature did not reach the requested tolerance."""


class VanishingLeadingOrder(AdiabaticError):
    """The first-order coefficients vanish identically.

    Signals that boundary cancelation is active and the higher-order
    trade-off path must be used instead of the generic one.
    """


class BoundaryConditionViolated(AdiabaticError):
    """Endpoint derivatives of the Hamiltonian are not zero to tolerance."""


class GridTooCoarse(AdiabaticError):
    """Grid-halving convergence check failed for the recurrence engine."""


class StepSizeUnderflow(AdiabaticError):
    """The propagator could not meet its tolerance within the step budget."""


class ZeroVector(AdiabaticError):
    """A state vector with (numerically) zero norm was supplied."""


class UnsupportedSchedule(AdiabaticError):
    """No closed form is available for the requested schedule."""


class ODEDivergence(AdiabaticError):
    """Schedule ODE integration failed or missed its boundary condition."""


class ConfigError(AdiabaticError):
    """Invalid run configuration; the message names the offending field."""
