"""The adiabatic search model and its closed-form trade-offs.

The drive interpolates between projectors missing the uniform
superposition and the marked item,

    H(s)/E = (1 - f(s)) (1 - |sigma><sigma|) + f(s) (1 - |m><m|),

whose dynamics lives in the two-dimensional span of |m> and its
orthogonal partner.  In that subspace the dimensionless gap is

    Delta(s) = sqrt(1 - 4 (N-1)/N f (1-f)),

the remaining N-2 levels sit at the constant eigenvalue 1, and every
quantity of the trade-off analysis has a closed form:

    lambda_10(s)       = (sqrt(N-1)/N) fdot / Delta^3
    <phi_1|Hdot|phi_0> = -(sqrt(N-1)/N) fdot / Delta
    F_phi0(s)          = [2 (sqrt(N-1)/N) fdot / Delta^2]^2

Schedules: linear f = s; the optimal constant-Fisher-speed profile;
and the boundary-cancelation beta family f_p = I_s(p+1, p+1).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad, solve_ivp

from .apt import TradeoffResult
from .errors import ODEDivergence, QuadratureFailure, UnsupportedSchedule
from .families import InterpolatingFamily, interpolating_family
from .schedules import Schedule, beta_schedule, linear_schedule, optimal_schedule

__all__ = [
    "grover_family",
    "make_schedule",
    "GroverClosedForms",
    "closed_tradeoff",
    "default_C",
    "fisher_geometry",
    "GeometrySummary",
    "schedule_from_constant_fisher",
    "resonance_times",
    "literature_bounds",
    "LiteratureBounds",
]

# Constants C that make the leading truncation converge, read off the
# reference sweeps; user-overridable everywhere.
DEFAULT_C = {"optimal": 9.5, "linear": 50.0, ("beta", 1): 50.0, ("beta", 2): 70.0}


def default_C(kind: str, p: int = 0) -> float:
    if kind == "beta":
        return DEFAULT_C.get(("beta", p), 50.0 + 20.0 * max(p - 1, 0))
    return DEFAULT_C.get(kind, 50.0)


def make_schedule(kind: str, N: int | None = None, p: int = 0) -> Schedule:
    if kind == "linear":
        return linear_schedule()
    if kind == "optimal":
        if N is None:
            raise ValueError("the optimal schedule needs N")
        return optimal_schedule(N)
    if kind == "beta":
        return beta_schedule(p)
    raise UnsupportedSchedule(f"unknown schedule kind {kind!r}")


def grover_family(
    N: int,
    schedule: Schedule,
    mode: str = "reduced2",
    marked: int = 0,
) -> InterpolatingFamily:
    """Search Hamiltonian family for an N-item database.

    ``reduced2`` builds the 2x2 matrix in the {|m>, |m_perp>} basis;
    ``fullN`` the N x N matrix from the projectors, with the marked
    item at ``marked`` (index 0 by default, without loss of
    generality).
    """
    if N < 2:
        raise ValueError("N must be >= 2")
    if mode == "reduced2":
        a = (N - 1) / N
        c = math.sqrt(N - 1) / N
        h_i = np.array([[a, -c], [-c, 1.0 / N]])
        h_f = np.array([[0.0, 0.0], [0.0, 1.0]])
        label = f"grover-reduced-N{N}-{schedule.kind}"
    elif mode == "fullN":
        if not 0 <= marked < N:
            raise ValueError("marked index out of range")
        sigma = np.full(N, 1.0 / math.sqrt(N))
        h_i = np.eye(N) - np.outer(sigma, sigma)
        h_f = np.eye(N)
        h_f[marked, marked] = 0.0
        label = f"grover-full-N{N}-{schedule.kind}"
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return interpolating_family(h_i, h_f, schedule, label=label)


@dataclass(frozen=True)
class GroverClosedForms:
    """Closed-form spectral and trade-off data of the search model.

    All methods accept scalar or array s.  ``j0_end`` uses the exact
    closed form for the linear and optimal schedules and adaptive
    quadrature for the beta family (``j0_approximation`` gives the
    fitted (N/2)(1 + sqrt(p) + p/20) value, documented as accurate to
    about 5%).
    """

    N: int
    schedule: Schedule
    _omega_end: float | None = field(default=None, repr=False)

    @property
    def kind(self) -> str:
        return self.schedule.kind

    @property
    def p(self) -> int:
        return self.schedule.p

    def delta(self, s):
        f = self.schedule(s)
        return np.sqrt(1.0 - 4.0 * (self.N - 1) / self.N * f * (1.0 - f))

    def theta(self, s):
        """Mixing angle of the instantaneous eigenstates."""
        f = self.schedule(s)
        x = (2.0 * (self.N - 1) / self.N * (1.0 - f) - 1.0) / self.delta(s)
        return 2.0 * np.arcsin(np.sqrt(0.5 * (1.0 - np.clip(x, -1.0, 1.0))))

    def ground_state(self, s) -> np.ndarray:
        half = 0.5 * self.theta(s)
        return np.array([np.sin(half), np.cos(half)])

    def energies(self, s):
        d = self.delta(s)
        return 0.5 * (1.0 - d), 0.5 * (1.0 + d)

    def matrix_element(self, s):
        """<phi_1|Hdot|phi_0> = -(sqrt(N-1)/N) fdot / Delta."""
        return -math.sqrt(self.N - 1) / self.N * self.schedule(s, 1) / self.delta(s)

    def lambda_10(self, s):
        return math.sqrt(self.N - 1) / self.N * self.schedule(s, 1) / self.delta(s) ** 3

    def lambda_dot_10(self, s):
        f = self.schedule(s)
        fdot = self.schedule(s, 1)
        fddot = self.schedule(s, 2)
        d = self.delta(s)
        ddot = -2.0 * (self.N - 1) / self.N * (1.0 - 2.0 * f) * fdot / d
        return math.sqrt(self.N - 1) / self.N * (fddot / d**3 - 3.0 * fdot * ddot / d**4)

    def fisher(self, s):
        """Quantum Fisher information of the ground state wrt s."""
        return (2.0 * math.sqrt(self.N - 1) / self.N * self.schedule(s, 1) / self.delta(s) ** 2) ** 2

    @property
    def j0_end(self) -> float:
        """J_0(1), exact closed form where available, quadrature otherwise."""
        N = self.N
        if self.kind == "linear":
            return (N - 1) / (3.0 * N) + 2.0 * (N - 1) / 3.0
        if self.kind == "optimal":
            return math.acos(1.0 / math.sqrt(N)) * math.sqrt(N - 1)
        value, err = quad(
            lambda s: (N - 1) / N**2 * self.schedule(s, 1) ** 2 / self.delta(s) ** 5,
            0.0,
            1.0,
            epsabs=1e-10,
            epsrel=1e-10,
            limit=400,
        )
        if err > max(1e-9, 1e-7 * abs(value)):
            raise QuadratureFailure(f"J_0(1) quadrature error {err:.3e}")
        return value

    @property
    def j0_approximation(self) -> float:
        """Fitted large-N form (N/2)(1 + sqrt(p) + p/20) of J_0(1)."""
        return 0.5 * self.N * (1.0 + math.sqrt(self.p) + self.p / 20.0)

    @property
    def omega_end(self) -> float:
        """omega_10(1) = int_0^1 Delta(s) ds."""
        if self._omega_end is not None:
            return self._omega_end
        value, err = quad(lambda s: float(self.delta(s)), 0.0, 1.0, epsabs=1e-12, limit=200)
        if err > 1e-8:
            raise QuadratureFailure(f"omega_10(1) quadrature error {err:.3e}")
        object.__setattr__(self, "_omega_end", value)
        return value

    def tradeoff(self, C: float | None = None, j0_method: str = "exact") -> TradeoffResult:
        return closed_tradeoff(
            self.N, self.kind, C=C, p=self.p, j0_method=j0_method, _forms=self
        )


def closed_tradeoff(
    N: int,
    schedule_kind: str,
    C: float | None = None,
    p: int | None = None,
    j0_method: str = "exact",
    _forms: GroverClosedForms | None = None,
) -> TradeoffResult:
    """Closed-form T_val, eps_tilde and bound for a named schedule.

    * optimal:  T_val = C arccos(1/sqrt(N)) sqrt(N-1),
                bound = 2 arccos(1/sqrt(N)) / T,
                eps_tilde = 2 / (C sqrt(N-1)).
    * linear:   T_val = (C/3) |2(N-1) - 17(N-1)/N|,
                bound = (2 sqrt(N-1)/N) / T,
                eps_tilde = 6 / (C |2N-17| sqrt(N-1)).
    * beta(p):  T_val = C |J_0(1) + p(p+1)|,
                bound = (2 sqrt(N-1)/N) (2p+1)!/p! / T^(p+1),
                eps_tilde = bound(T_val);
      ``j0_method`` picks the exact quadrature of J_0(1) (default) or
      the fitted approximation (N/2)(1 + sqrt(p) + p/20).

    Custom schedules have no closed form; use the generic engine
    (``apt.tradeoff`` / ``apt.bc_tradeoff``) for those.
    """
    if schedule_kind not in ("linear", "optimal", "beta"):
        raise UnsupportedSchedule(
            f"no closed form for schedule {schedule_kind!r}; "
            "fall back to the generic engine"
        )
    p = int(p or 0)
    if C is None:
        C = default_C(schedule_kind, p)
    extra: dict = {"N": N, "schedule": schedule_kind}
    if schedule_kind == "optimal":
        length = math.acos(1.0 / math.sqrt(N))
        t_val = C * length * math.sqrt(N - 1)
        coeff = 2.0 * length
        p_eff = 0
    elif schedule_kind == "linear":
        t_val = C / 3.0 * abs(2.0 * (N - 1) - 17.0 * (N - 1) / N)
        coeff = 2.0 * math.sqrt(N - 1) / N
        p_eff = 0
    else:
        if p < 1:
            raise ValueError("beta schedules need p >= 1")
        forms = _forms or GroverClosedForms(N, beta_schedule(p))
        j0 = forms.j0_end if j0_method == "exact" else forms.j0_approximation
        extra["j0_exact"] = forms.j0_end
        extra["j0_approximation"] = forms.j0_approximation
        t_val = C * abs(j0 + p * (p + 1))
        coeff = (
            2.0
            * math.sqrt(N - 1)
            / N
            * math.factorial(2 * p + 1)
            / math.factorial(p)
        )
        p_eff = p
    return TradeoffResult.from_bound(
        T_val=t_val,
        bound_coeff=coeff,
        C=C,
        p=p_eff,
        label=f"grover-N{N}-{schedule_kind}" + (f"-p{p}" if p else ""),
        extra=extra,
    )


@dataclass(frozen=True)
class GeometrySummary:
    """Action, Bures length and the geodesic floor of the ground path."""

    action: float
    bures_length: float
    shortest_length: float

    @property
    def cauchy_schwarz_slack(self) -> float:
        """K - L^2 >= 0, zero exactly for constant Fisher speed."""
        return self.action - self.bures_length**2


def fisher_geometry(N: int, schedule: Schedule, s=None):
    """Fisher information of the ground path, or its aggregate geometry.

    With ``s`` given returns F_phi0(s); otherwise returns the
    GeometrySummary with the action K = (1/4) int F ds, the Bures
    length L = (1/2) int sqrt(F) ds and the shortest-path length
    arccos(1/sqrt(N)).  K >= L^2 with equality iff F is constant.
    """
    forms = GroverClosedForms(N, schedule)
    if s is not None:
        return forms.fisher(s)
    action, err_k = quad(
        lambda x: 0.25 * float(forms.fisher(x)), 0.0, 1.0, epsabs=1e-12, epsrel=1e-12, limit=400
    )
    length, err_l = quad(
        lambda x: 0.5 * math.sqrt(float(forms.fisher(x))), 0.0, 1.0,
        epsabs=1e-12, epsrel=1e-12, limit=400,
    )
    if max(err_k, err_l) > 1e-8 * max(1.0, action):
        raise QuadratureFailure("fisher geometry quadrature did not converge")
    return GeometrySummary(
        action=action,
        bures_length=length,
        shortest_length=math.acos(1.0 / math.sqrt(N)),
    )


def schedule_from_constant_fisher(N: int, tol: float = 1e-10) -> Schedule:
    """Solve fdot = (N/sqrt(N-1)) arccos(1/sqrt(N)) Delta^2(f) numerically.

    Returns a tabulated schedule (dense ODE interpolant with analytic
    first and second derivatives through the right-hand side); matches
    the closed-form optimal profile pointwise.
    """
    rate = N / math.sqrt(N - 1) * math.acos(1.0 / math.sqrt(N))
    a = (N - 1) / N

    def delta_sq(f):
        return 1.0 - 4.0 * a * f * (1.0 - f)

    sol = solve_ivp(
        lambda s, f: rate * delta_sq(f[0]),
        (0.0, 1.0),
        [0.0],
        method="DOP853",
        dense_output=True,
        rtol=1e-13,
        atol=min(tol * 1e-2, 1e-13),
    )
    if not sol.success:
        raise ODEDivergence(f"schedule ODE failed: {sol.message}")
    end = float(sol.sol(1.0)[0])
    if abs(end - 1.0) > tol:
        raise ODEDivergence(f"f(1) = {end} misses 1 by more than {tol}")

    def evaluate(s, deriv):
        s = np.asarray(s, dtype=float)
        f = np.clip(sol.sol(s.ravel())[0].reshape(s.shape), 0.0, 1.0)
        if deriv == 0:
            out = f
        elif deriv == 1:
            out = rate * delta_sq(f)
        else:
            out = rate * (-4.0 * a * (1.0 - 2.0 * f)) * rate * delta_sq(f)
        return out if out.ndim else float(out)

    return Schedule(kind="optimal-ode", p=0, max_deriv=2, _eval=evaluate)


def resonance_times(N: int, schedule: Schedule, n_max: int) -> np.ndarray:
    """Run times T_n = 2 pi n / omega_10(1), n = 1..n_max.

    At these T the leading error coefficient vanishes by boundary
    symmetry and the error improves to 1/T^2; they form a zero-measure
    set excluded from the trade-off claims.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    omega = GroverClosedForms(N, schedule).omega_end
    return 2.0 * math.pi * np.arange(1, n_max + 1) / omega


@dataclass(frozen=True)
class LiteratureBounds:
    """Published comparison expressions (not tight; overlay curves only)."""

    N: int
    T: float | None = None
    eps: float | None = None
    jansen_eps: float | None = None
    roland_time: float | None = None
    tight: bool = False


def literature_bounds(N: int, T: float | None = None, eps: float | None = None) -> LiteratureBounds:
    """Evaluate the published comparison expressions.

    Jansen-style bound eps <= (pi/2 + pi^2) sqrt(N) / T for a given T;
    Roland-style run time T = (pi/2) sqrt(N) / eps for a given error.
    Both are flagged non-tight.
    """
    jansen = (math.pi / 2 + math.pi**2) * math.sqrt(N) / T if T is not None else None
    roland = (math.pi / 2) * math.sqrt(N) / eps if eps is not None else None
    return LiteratureBounds(N=N, T=T, eps=eps, jansen_eps=jansen, roland_time=roland)
