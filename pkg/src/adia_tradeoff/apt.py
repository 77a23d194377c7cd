"""Adiabatic perturbation theory: coefficients, bounds and validity.

The physical state is expanded over the instantaneous eigenbasis with
coefficients written as a series in (i/T)^p (hbar = 1).  This module
evaluates the first two nonvanishing coefficient orders in closed form,
turns them into the leading error (Bures angle), oscillation-free upper
and lower bounds, and the validity data of the truncation:

* ``T_val``     -- shortest run time for which the leading term dominates,
  T_val = C |sum_n Im(b_n*^(q) b_n^(q+1))| / sum_n |b_n^(q)|^2,
* ``eps_tilde`` -- the error bound evaluated at T_val, i.e. the largest
  error for which the trade-off relation is asserted.

Coefficients are kept phase-explicit: a coefficient is a sum of
T-independent amplitudes attached to phase frequencies, so a single
evaluation serves every T.  For validity quantities the oscillatory
factors are taken at their point of maximum modulus (each |e^{i theta}
-/+ 1| replaced by 2), which is also what the closed-form search
expressions assume; the phase-explicit data remains available for
T-resolved values.

Boundary cancelation (all H^(j), 1 <= j <= p, zero at both endpoints)
raises the leading order from 1/T to 1/T^(p+1); the ``bc_*`` functions
build the corresponding coefficient pair from endpoint derivatives of H
only, using lambda_n0^(j) = -<phi_n|H^(j+1)|phi_0>/Delta_n0^2 at the
endpoints.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad

from .errors import (
    BoundaryConditionViolated,
    QuadratureFailure,
    VanishingLeadingOrder,
)
from .families import HamiltonianFamily
from .spectral import (
    DEGENERACY_THRESHOLD,
    SpectralFrame,
    dynamical_phases_on_grid,
    frame_path,
    spectral_frame,
)

__all__ = [
    "OscillatoryCoeff",
    "CoefficientSet",
    "TradeoffResult",
    "b1",
    "b2",
    "j_integral",
    "j_fisher_bound",
    "leading_distance",
    "distance_bounds",
    "validity_time",
    "epsilon_tilde",
    "tradeoff",
    "bc_coefficients",
    "bc_tradeoff",
    "distance_expansion",
]

DEFAULT_PATH_POINTS = 65
DEFAULT_QUAD_TOL = 1e-10
# sum_n |b_n|^2 below this means the order vanishes identically
VANISHING_NORM_SQ = 1e-24


@dataclass(frozen=True)
class OscillatoryCoeff:
    """A T-dependent coefficient sum_j a_j exp(i T nu_j).

    Amplitudes are T-independent; all T dependence sits in the phases.
    """

    amplitudes: np.ndarray
    frequencies: np.ndarray

    def at(self, T: float) -> complex:
        return complex(np.sum(self.amplitudes * np.exp(1j * T * self.frequencies)))

    def dT(self, T: float) -> complex:
        """Derivative with respect to T (used for on-resonance limits)."""
        return complex(
            np.sum(self.amplitudes * 1j * self.frequencies * np.exp(1j * T * self.frequencies))
        )

    @property
    def max_modulus(self) -> float:
        """Modulus with every oscillatory factor at its maximum."""
        return float(np.sum(np.abs(self.amplitudes)))


@dataclass(frozen=True)
class CoefficientSet:
    """Phase-explicit coefficients of one expansion order, all excited levels."""

    order: int
    s: float
    levels: tuple
    coeffs: tuple
    b0: float | None = None

    def at(self, T: float) -> np.ndarray:
        return np.array([c.at(T) for c in self.coeffs])

    def dT(self, T: float) -> np.ndarray:
        return np.array([c.dT(T) for c in self.coeffs])

    def max_moduli(self) -> np.ndarray:
        return np.array([c.max_modulus for c in self.coeffs])


@dataclass(frozen=True)
class TradeoffResult:
    """One error / run-time trade-off relation.

    ``bound(T) = bound_coeff / T**(p+1)`` is the oscillation-free upper
    bound on the error; it is asserted only for T >= T_val, where it is
    at most eps_tilde.  ``claim(alpha)`` expresses the rescaled contract
    error <= alpha^(p+1) * eps_tilde for T >= T_val / alpha.
    """

    T_val: float
    eps_tilde: float
    C: float
    p: int
    bound_coeff: float
    label: str = ""
    extra: dict = field(default_factory=dict, repr=False)

    @classmethod
    def from_bound(cls, T_val, bound_coeff, C, p, label="", extra=None):
        eps = bound_coeff / T_val ** (p + 1)
        return cls(
            T_val=float(T_val),
            eps_tilde=float(eps),
            C=float(C),
            p=int(p),
            bound_coeff=float(bound_coeff),
            label=label,
            extra=extra or {},
        )

    def bound(self, T) -> float:
        T = np.asarray(T, dtype=float)
        out = self.bound_coeff / T ** (self.p + 1)
        return out if out.ndim else float(out)

    def below_validity(self, T) -> bool:
        return bool(T < self.T_val)

    def claim(self, alpha: float = 1.0) -> tuple[float, float]:
        if not 0.0 < alpha <= 1.0:
            raise ValueError("alpha must be in (0, 1]")
        return self.T_val / alpha, alpha ** (self.p + 1) * self.eps_tilde


# ---------------------------------------------------------------------------
# endpoint data


def _endpoint_data(family, s, path_points):
    """Aligned frames at 0 and s plus the phases omega_n(s)."""
    grid = np.linspace(0.0, s, path_points)
    frames = frame_path(family, grid)
    omega = dynamical_phases_on_grid(family, grid)[:, -1]
    return frames[0], frames[-1], omega


def _lambda_vector(frame: SpectralFrame) -> np.ndarray:
    """lambda_n0 = M_n0 / Delta_n0 for n = 1..d-1."""
    d = frame.dimension
    return np.array([frame.lam(n, 0) for n in range(1, d)])


def _lambda_dot_vector(frame: SpectralFrame, family: HamiltonianFamily) -> np.ndarray:
    """d/ds lambda_n0 in the parallel-transport gauge, n = 1..d-1.

    Uses d/ds <phi_n|Hdot|phi_0> = <phidot_n|Hdot|phi_0>
    + <phi_n|Hddot|phi_0> + <phi_n|Hdot|phidot_0> with
    phidot_k = sum_{j != k} M_jk phi_j, so only H and its first two
    derivatives enter; no eigenvector is differenced numerically.
    """
    v = frame.vectors
    g1 = frame.hdot_elements
    g2 = v.conj().T @ family.eval(frame.s, 2) @ v
    m = frame.couplings
    e = frame.energies
    d = frame.dimension
    out = np.zeros(d - 1, dtype=g1.dtype)
    for n in range(1, d):
        delta = e[n] - e[0]
        hdot = g2[n, 0]
        hdot += sum(np.conj(m[j, n]) * g1[j, 0] for j in range(d) if j != n)
        hdot += sum(m[j, 0] * g1[n, j] for j in range(d) if j != 0)
        delta_dot = g1[n, n] - g1[0, 0]
        out[n - 1] = -hdot / delta**2 + 2.0 * g1[n, 0] * delta_dot / delta**3
    return out


# ---------------------------------------------------------------------------
# J integrals


def _j_integrand(family, n, x):
    frame = spectral_frame(family, x)
    e = frame.energies
    scale = max(1.0, float(np.abs(e).max()))
    total = 0.0
    for k in range(frame.dimension):
        if k == n:
            continue
        delta = e[k] - e[n]
        if abs(delta) < DEGENERACY_THRESHOLD * scale:
            continue  # verified uncoupled, contributes nothing
        total += abs(frame.couplings[k, n]) ** 2 / delta
    return total


def j_integral(family, n: int, s: float, tol: float = DEFAULT_QUAD_TOL) -> float:
    """J_n(s) = sum_{k != n} int_0^s |<phi_k|phidot_n>|^2 / Delta_kn ds'.

    Positive for the ground level; the sign for excited levels follows
    the Delta_kn = E_k - E_n convention.
    """
    if s == 0.0:
        return 0.0
    value, err = quad(
        lambda x: _j_integrand(family, n, x), 0.0, s, epsabs=tol, epsrel=1e-12, limit=200
    )
    if err > max(tol, 1e-8 * abs(value)):
        raise QuadratureFailure(
            f"J_{n}({s}): error estimate {err:.3e} exceeds tolerance {tol:.3e}"
        )
    return value


def j_fisher_bound(family, n: int, s: float, tol: float = DEFAULT_QUAD_TOL) -> float:
    """Fisher-information bound on J_n(s).

    Integrates F_n(s') / (4 min_{k != n} Delta_kn); F_n is the quantum
    Fisher information of level n with respect to s.  Equals J_n exactly
    when a single gap carries all the coupling (any two-level system).
    """
    if s == 0.0:
        return 0.0

    def integrand(x):
        frame = spectral_frame(family, x)
        e = frame.energies
        fisher = 4.0 * sum(
            abs(frame.couplings[k, n]) ** 2 for k in range(frame.dimension) if k != n
        )
        if fisher == 0.0:
            return 0.0
        min_gap = min(e[k] - e[n] for k in range(frame.dimension) if k != n)
        return fisher / (4.0 * min_gap)

    value, err = quad(integrand, 0.0, s, epsabs=tol, epsrel=1e-12, limit=200)
    if err > max(tol, 1e-8 * abs(value)):
        raise QuadratureFailure(
            f"Fisher bound for J_{n}({s}): error estimate {err:.3e} > {tol:.3e}"
        )
    return value


# ---------------------------------------------------------------------------
# first and second order coefficients


def _first_order(family, s, path_points=DEFAULT_PATH_POINTS):
    if s == 0.0:
        frame = spectral_frame(family, 0.0)
        lam0 = _lambda_vector(frame)
        coeffs = tuple(
            OscillatoryCoeff(np.array([l, -l]), np.zeros(2)) for l in lam0
        )
        return CoefficientSet(1, 0.0, tuple(range(1, family.dimension)), coeffs)
    frame0, frame_s, omega = _endpoint_data(family, s, path_points)
    lam0 = _lambda_vector(frame0)
    lams = _lambda_vector(frame_s)
    coeffs = tuple(
        OscillatoryCoeff(
            np.array([lams[i], -lam0[i]]),
            np.array([omega[i + 1] - omega[0], 0.0]),
        )
        for i in range(family.dimension - 1)
    )
    return CoefficientSet(1, float(s), tuple(range(1, family.dimension)), coeffs)


def b1(
    family: HamiltonianFamily,
    s: float,
    tol: float = DEFAULT_QUAD_TOL,
    path_points: int = DEFAULT_PATH_POINTS,
) -> CoefficientSet:
    """First-order coefficients b_n^(1)(s) in phase-explicit form.

    For each excited level the coefficient is the pair of boundary
    terms e^{i T omega_n0(s)} lambda_n0(s) - lambda_n0(0); T enters
    only at assembly.  The diagonal piece b_0^(1)(s) = J_0(s) (real)
    rides along in ``b0``.
    """
    base = _first_order(family, s, path_points)
    return CoefficientSet(
        order=1,
        s=base.s,
        levels=base.levels,
        coeffs=base.coeffs,
        b0=j_integral(family, 0, s, tol) if s > 0 else 0.0,
    )


def b2(
    family: HamiltonianFamily,
    s: float,
    tol: float = DEFAULT_QUAD_TOL,
    path_points: int = DEFAULT_PATH_POINTS,
) -> CoefficientSet:
    """Second-order coefficients b_n^(2)(s) in phase-explicit form.

    Implements the boundary-plus-memory structure

        e^{i T omega_n0(s)} [J_0(s) lambda_n0 + lambdadot_n0/Delta_n0
            + sum_{k != 0,n} lambda_k0 M_nk / Delta_n0]_s
        - [same bracket]_0 - J_n(s) lambda_n0(0)
        - sum_{k != 0,n} (e^{i T omega_nk(s)} lambda_k0(0) lambda_nk(s)
            - lambda_k0(0) lambda_nk(0)),

    grouped by phase frequency {omega_n0(s), omega_nk(s), 0}.
    """
    if s == 0.0:
        d = family.dimension
        coeffs = tuple(
            OscillatoryCoeff(np.zeros(1, dtype=complex), np.zeros(1))
            for _ in range(d - 1)
        )
        return CoefficientSet(2, 0.0, tuple(range(1, d)), coeffs)

    frame0, frame_s, omega = _endpoint_data(family, s, path_points)
    d = family.dimension
    j0 = j_integral(family, 0, s, tol)
    j_excited = [j_integral(family, n, s, tol) for n in range(1, d)]
    lam0 = _lambda_vector(frame0)
    lams = _lambda_vector(frame_s)
    ld0 = _lambda_dot_vector(frame0, family)
    lds = _lambda_dot_vector(frame_s, family)

    coeffs = []
    for n in range(1, d):
        delta_s = frame_s.gap(n)
        delta_0 = frame0.gap(n)
        amp_s = j0 * lams[n - 1] + lds[n - 1] / delta_s
        amp_0 = -j_excited[n - 1] * lam0[n - 1] - ld0[n - 1] / delta_0
        amps = []
        freqs = []
        for k in range(1, d):
            if k == n:
                continue
            lam_k0_s = frame_s.lam(k, 0)
            lam_k0_0 = frame0.lam(k, 0)
            amp_s += lam_k0_s * frame_s.couplings[n, k] / delta_s
            amp_0 += -lam_k0_0 * frame0.couplings[n, k] / delta_0
            amp_0 += lam_k0_0 * frame0.lam(n, k)
            cross = -lam_k0_0 * frame_s.lam(n, k)
            if cross != 0.0:
                amps.append(cross)
                freqs.append(omega[n] - omega[k])
        amps = [amp_s] + amps + [amp_0]
        freqs = [omega[n] - omega[0]] + freqs + [0.0]
        coeffs.append(
            OscillatoryCoeff(np.asarray(amps, dtype=complex), np.asarray(freqs))
        )
    return CoefficientSet(2, float(s), tuple(range(1, d)), tuple(coeffs))


# ---------------------------------------------------------------------------
# leading error and bounds


def leading_distance(family, s: float, T: float, path_points=DEFAULT_PATH_POINTS) -> float:
    """Leading-order Bures angle at run time T, oscillating phase included.

    (1/T) sqrt(sum_n |e^{i T omega_n0} <phi_n|Hdot|phi_0>/Delta_n0^2 |_0^s|^2).
    """
    if T <= 0:
        raise ValueError("T must be positive")
    first = _first_order(family, s, path_points)
    vals = first.at(T)
    return float(np.sqrt(np.sum(np.abs(vals) ** 2)) / T)


def distance_bounds(family, s: float, T: float, path_points=DEFAULT_PATH_POINTS):
    """Oscillation-free lower and upper bounds on the leading error.

    Per level the oscillating modulus lies between ||a_s| - |a_0|| and
    |a_s| + |a_0|, which avoids evaluating the unstable phase factor and
    needs endpoint data only.  Returns ``(lower, upper)``.
    """
    if T <= 0:
        raise ValueError("T must be positive")
    if s == 0.0:
        return 0.0, 0.0  # empty window: the phase cannot oscillate yet
    first = _first_order(family, s, path_points)
    lo_sq = 0.0
    hi_sq = 0.0
    for c in first.coeffs:
        a_s, a_0 = np.abs(c.amplitudes[0]), np.abs(c.amplitudes[1])
        hi_sq += (a_s + a_0) ** 2
        lo_sq += (a_s - a_0) ** 2
    return float(np.sqrt(lo_sq) / T), float(np.sqrt(hi_sq) / T)


def _validity_sums(first: CoefficientSet, second: CoefficientSet):
    beta1 = first.max_moduli()
    beta2 = second.max_moduli()
    norm_sq = float(np.sum(beta1**2))
    cross = float(np.sum(beta1 * beta2))
    if norm_sq <= VANISHING_NORM_SQ:
        raise VanishingLeadingOrder(
            "first-order coefficients vanish; use the boundary-cancelation "
            "path (bc_tradeoff with p >= 1)"
        )
    return norm_sq, cross


def validity_time(
    family,
    s: float,
    C: float,
    tol: float = DEFAULT_QUAD_TOL,
    path_points: int = DEFAULT_PATH_POINTS,
) -> float:
    """Shortest run time T_val for which the leading term dominates.

    C |sum_n Im(b_n*^(1) b_n^(2))| / sum_n |b_n^(1)|^2 with every
    oscillatory factor at maximum modulus.
    """
    first = _first_order(family, s, path_points)
    second = b2(family, s, tol, path_points)
    norm_sq, cross = _validity_sums(first, second)
    return C * cross / norm_sq


def epsilon_tilde(
    family,
    s: float,
    C: float,
    tol: float = DEFAULT_QUAD_TOL,
    path_points: int = DEFAULT_PATH_POINTS,
) -> float:
    """Largest error for which the leading-order relation is asserted.

    (1/C) (sum |b^(1)|^2)^(3/2) / |sum Im(b*^(1) b^(2))| under the same
    oscillatory-maximum convention as ``validity_time``; equals the
    upper distance bound evaluated at T_val.
    """
    first = _first_order(family, s, path_points)
    second = b2(family, s, tol, path_points)
    norm_sq, cross = _validity_sums(first, second)
    return norm_sq**1.5 / (C * cross)


def tradeoff(
    family,
    s: float,
    C: float,
    tol: float = DEFAULT_QUAD_TOL,
    path_points: int = DEFAULT_PATH_POINTS,
    label: str = "",
) -> TradeoffResult:
    """Generic (no boundary cancelation) trade-off at time s."""
    first = _first_order(family, s, path_points)
    second = b2(family, s, tol, path_points)
    norm_sq, cross = _validity_sums(first, second)
    return TradeoffResult.from_bound(
        T_val=C * cross / norm_sq,
        bound_coeff=math.sqrt(norm_sq),
        C=C,
        p=0,
        label=label or family.label,
    )


# ---------------------------------------------------------------------------
# boundary cancelation


def _endpoint_derivative_norm(family, e, j):
    return float(np.abs(family.eval(e, j)).max())


def bc_coefficients(
    family,
    p: int,
    tol: float = DEFAULT_QUAD_TOL,
    path_points: int = DEFAULT_PATH_POINTS,
    endpoint_tol: float = 1e-10,
):
    """Coefficients b_n^(p+1)(1), b_n^(p+2)(1) under boundary cancelation.

    Requires H^(j)(0) = 0 = H^(j)(1) for 1 <= j <= p (verified
    numerically; raises BoundaryConditionViolated otherwise).  Built
    from endpoint derivatives of H and the integrals J_0(1), J_n(1)
    only, via lambda_n0^(j) = -<phi_n|H^(j+1)|phi_0>/Delta_n0^2 at the
    endpoints.
    """
    if p < 1:
        raise ValueError("bc_coefficients needs p >= 1; use b1/b2 otherwise")
    if family.max_deriv < p + 2:
        raise ValueError(
            f"family supports derivatives up to {family.max_deriv}, need {p + 2}"
        )
    scale = max(
        1.0,
        float(np.abs(family.eval(0.0, 0)).max()),
        float(np.abs(family.eval(1.0, 0)).max()),
    )
    for e in (0.0, 1.0):
        for j in range(1, p + 1):
            norm = _endpoint_derivative_norm(family, e, j)
            if norm > endpoint_tol * scale:
                raise BoundaryConditionViolated(
                    f"||H^({j})({e})|| = {norm:.3e} exceeds {endpoint_tol * scale:.3e}"
                )

    frame0, frame1, omega = _endpoint_data(family, 1.0, path_points)
    d = family.dimension
    j0 = j_integral(family, 0, 1.0, tol)
    j_excited = [j_integral(family, n, 1.0, tol) for n in range(1, d)]

    def lam_deriv(frame, order):
        g = frame.vectors.conj().T @ family.eval(frame.s, order + 1) @ frame.vectors
        deltas = frame.energies[1:] - frame.energies[0]
        return -g[1:, 0] / deltas**2

    lp_0, lp_1 = lam_deriv(frame0, p), lam_deriv(frame1, p)
    lq_0, lq_1 = lam_deriv(frame0, p + 1), lam_deriv(frame1, p + 1)
    delta0 = frame0.energies[1:] - frame0.energies[0]
    delta1 = frame1.energies[1:] - frame1.energies[0]

    lead, nxt = [], []
    for i in range(d - 1):
        freq = omega[i + 1] - omega[0]
        lead.append(
            OscillatoryCoeff(
                np.array([lp_1[i] / delta1[i] ** p, -lp_0[i] / delta0[i] ** p]),
                np.array([freq, 0.0]),
            )
        )
        nxt.append(
            OscillatoryCoeff(
                np.array(
                    [
                        lq_1[i] / delta1[i] ** (p + 1) + j0 * lp_1[i] / delta1[i] ** p,
                        -lq_0[i] / delta0[i] ** (p + 1)
                        - j_excited[i] * lp_0[i] / delta0[i] ** p,
                    ]
                ),
                np.array([freq, 0.0]),
            )
        )
    levels = tuple(range(1, d))
    return (
        CoefficientSet(p + 1, 1.0, levels, tuple(lead)),
        CoefficientSet(p + 2, 1.0, levels, tuple(nxt)),
    )


def bc_tradeoff(
    family,
    p: int,
    C: float,
    tol: float = DEFAULT_QUAD_TOL,
    path_points: int = DEFAULT_PATH_POINTS,
    label: str = "",
) -> TradeoffResult:
    """Trade-off under order-p boundary cancelation.

    The error bound decays as 1/T^(p+1); T_val and eps_tilde follow the
    same maximum-modulus convention as the generic path.  p = 0 simply
    delegates to that path.
    """
    if p == 0:
        return tradeoff(family, 1.0, C, tol, path_points, label)
    lead, nxt = bc_coefficients(family, p, tol, path_points)
    beta1 = lead.max_moduli()
    beta2 = nxt.max_moduli()
    norm_sq = float(np.sum(beta1**2))
    if norm_sq <= VANISHING_NORM_SQ:
        raise VanishingLeadingOrder(
            f"order-{p + 1} coefficients vanish as well; increase p"
        )
    t_val = C * float(np.sum(beta1 * beta2)) / norm_sq
    return TradeoffResult.from_bound(
        T_val=t_val,
        bound_coeff=math.sqrt(norm_sq),
        C=C,
        p=p,
        label=label or family.label,
    )


# ---------------------------------------------------------------------------
# two-term expansion of the distance


def distance_expansion(table, T: float, p: int = 0) -> tuple[float, float]:
    """The two displayed terms of the 1/T expansion of the Bures angle.

    ``table`` is a CoefficientTable holding orders up to p + 2 whose
    aggregated coefficients vanish through order p at the evaluation
    point (checked); a (first, second) pair of CoefficientSets is
    accepted as well.  Returns ``(leading, next)`` with

        leading = T^-(p+1) sqrt(sum_n |b_n^(p+1)|^2)
        next    = -T^-(p+2) [ sum_n Im(b_n*^(p+1) b_n^(p+2)) / sqrt(...)
                              - sqrt(...) Im(b_0^(1)) ]        (p = 0)

    (the b_0^(1) correction drops for p >= 1, where b_0^(1) is real).
    On resonance -- the leading aggregate vanishing at this exact T --
    the returned next term is the directional limit from above, which
    stays finite.
    """
    if T <= 0:
        raise ValueError("T must be positive")
    if isinstance(table, (tuple, list)):
        first, second = table
        if second.order != first.order + 1:
            raise ValueError("need two consecutive coefficient orders")
        lead_vec = first.at(T)
        next_vec = second.at(T)
        lead_dot = first.dT(T)
        scale = float(np.sum(first.max_moduli()))
        b0_imag = 0.0 if first.b0 is None else float(np.imag(first.b0))
        grid_error = 0.0
        vanish_ok = first.order == p + 1
    else:
        if table.order_max < p + 2:
            raise ValueError(f"table holds orders up to {table.order_max}, need {p + 2}")
        grid_error = table.grid_error
        tol = max(10.0 * grid_error, 1e-10)
        for q in range(1, p + 1):
            size = float(np.abs(table.aggregate(q, T)[1:]).max())
            if size > tol:
                raise ValueError(
                    f"order-{q} coefficients do not vanish (max {size:.3e} > {tol:.3e})"
                )
        lead_vec = table.aggregate(p + 1, T)[1:]
        next_vec = table.aggregate(p + 2, T)[1:]
        lead_dot = table.aggregate_dT(p + 1, T)[1:]
        scale = float(np.sum(table.max_moduli(p + 1)[1:]))
        b0_imag = float(np.imag(table.aggregate(1, T)[0])) if p == 0 else 0.0
        vanish_ok = True
    if not vanish_ok:
        raise ValueError("coefficient pair does not start at order p + 1")

    norm = float(np.sqrt(np.sum(np.abs(lead_vec) ** 2)))
    leading = norm / T ** (p + 1)

    if norm > 1e-8 * max(scale, 1e-300):
        cross = float(np.sum(np.imag(np.conj(lead_vec) * next_vec)))
        nxt = -(cross / norm) / T ** (p + 2)
        if p == 0:
            nxt += norm * b0_imag / T ** (p + 2)
    else:
        # resonance: b^(p+1)(T + tau) ~ tau * db/dT, limit from tau -> 0+
        dot_norm = float(np.sqrt(np.sum(np.abs(lead_dot) ** 2)))
        if dot_norm == 0.0:
            return leading, 0.0
        cross = float(np.sum(np.imag(np.conj(lead_dot) * next_vec)))
        nxt = -(cross / dot_norm) / T ** (p + 2)
    return leading, nxt
