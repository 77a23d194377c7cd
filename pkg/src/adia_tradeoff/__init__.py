"""Error / run-time trade-offs for the quantum adiabatic approximation.

Leading-order errors of the adiabatic approximation in 1/T, explicit
validity times and validity errors, boundary cancelation, exact
Schroedinger propagation for ground truth, and the adiabatic search
model with every trade-off in closed form.  Units: hbar = 1 and the
Hamiltonian energy scale is 1, so run times are dimensionless.
"""
from .apt import (
    CoefficientSet,
    OscillatoryCoeff,
    TradeoffResult,
    b1,
    b2,
    bc_coefficients,
    bc_tradeoff,
    distance_bounds,
    distance_expansion,
    epsilon_tilde,
    j_fisher_bound,
    j_integral,
    leading_distance,
    tradeoff,
    validity_time,
)
from .errors import (
    AdiabaticError,
    BoundaryConditionViolated,
    ConfigError,
    DegenerateBlockCoupling,
    DegenerateGroundGap,
    GridTooCoarse,
    ODEDivergence,
    QuadratureFailure,
    StepSizeUnderflow,
    UnsupportedSchedule,
    VanishingLeadingOrder,
    ZeroVector,
)
from .families import HamiltonianFamily, InterpolatingFamily, interpolating_family
from .grover import (
    GeometrySummary,
    GroverClosedForms,
    LiteratureBounds,
    closed_tradeoff,
    default_C,
    fisher_geometry,
    grover_family,
    literature_bounds,
    make_schedule,
    resonance_times,
    schedule_from_constant_fisher,
)
from .propagation import SimulationTrace, bures_angle, propagate, truncated_state
from .recurrence import CoefficientTable, default_grid, recurrence_table
from .schedules import (
    Schedule,
    beta_schedule,
    custom_schedule,
    linear_schedule,
    optimal_schedule,
)
from .spectral import (
    SpectralFrame,
    dynamical_phase,
    dynamical_phases_on_grid,
    frame_path,
    spectral_frame,
)

__version__ = "0.1.0"
