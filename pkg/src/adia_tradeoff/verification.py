"""Desk-scale verification battery.

Every check compares a measured quantity against its pinned tolerance
and reports a CheckResult; the CLI ``verify`` subcommand runs the whole
battery and exits nonzero on any failure.  The same functions back the
acceptance test module, so the command line and the test suite cannot
drift apart.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import apt
from .grover import (
    GroverClosedForms,
    closed_tradeoff,
    fisher_geometry,
    grover_family,
    literature_bounds,
    make_schedule,
    optimal_schedule,
    resonance_times,
    schedule_from_constant_fisher,
)
from .propagation import propagate
from .recurrence import recurrence_table

__all__ = ["CheckResult", "run_all", "ALL_CHECKS"]


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    measured: float
    tolerance: float
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        text = f"{status}  {self.name}: measured={self.measured:.6g} tolerated={self.tolerance:.6g}"
        if self.detail:
            text += f"  ({self.detail})"
        return text


def _fit(xs, ys) -> float:
    return float(np.polyfit(np.log(np.asarray(xs, float)), np.log(np.asarray(ys, float)), 1)[0])


def _slope_check(name, n_values, kind, p, C, expected_tval, expected_eps, tol):
    t_vals, eps_vals = [], []
    for n in n_values:
        trade = closed_tradeoff(int(n), kind, C=C, p=p)
        t_vals.append(trade.T_val)
        eps_vals.append(trade.eps_tilde)
    slope_t = _fit(n_values, t_vals)
    slope_e = _fit(n_values, eps_vals)
    err = max(abs(slope_t - expected_tval), abs(slope_e - expected_eps))
    return CheckResult(
        name,
        err <= tol,
        err,
        tol,
        f"T_val slope {slope_t:.4f} (want {expected_tval}), "
        f"eps_tilde slope {slope_e:.4f} (want {expected_eps})",
    )


def check_optimal_scaling() -> CheckResult:
    """T_val ~ sqrt(N) and eps_tilde ~ 1/sqrt(N) for the optimal schedule."""
    return _slope_check(
        "closed-form scaling, optimal schedule",
        2 ** np.arange(4, 11), "optimal", 0, 9.5, 0.5, -0.5, 0.05,
    )


def check_linear_scaling() -> CheckResult:
    """T_val ~ N and eps_tilde ~ 1/N^1.5 for the linear schedule.

    The |2N - 17| factor distorts the exact closed forms below N ~ 500,
    so the fit window sits in the asymptotic regime.
    """
    return _slope_check(
        "closed-form scaling, linear schedule",
        2 ** np.arange(9, 16), "linear", 0, 50.0, 1.0, -1.5, 0.05,
    )


def check_beta_scaling() -> list[CheckResult]:
    """eps_tilde ~ 1/N^(p+3/2) for boundary cancelation, p = 1, 2."""
    out = []
    for p, C in ((1, 50.0), (2, 70.0)):
        n_values = 2 ** np.arange(9, 16)
        eps_vals = [closed_tradeoff(int(n), "beta", C=C, p=p).eps_tilde for n in n_values]
        slope = _fit(n_values, eps_vals)
        expected = -(p + 1.5)
        out.append(
            CheckResult(
                f"boundary-cancelation scaling, p={p}",
                abs(slope - expected) <= 0.07,
                abs(slope - expected),
                0.07,
                f"eps_tilde slope {slope:.4f} (want {expected})",
            )
        )
    return out


def check_beta_j0_approximation() -> CheckResult:
    """Quadrature J_0(1) against the fitted (N/2)(1+sqrt(p)+p/20) form."""
    worst = 0.0
    detail = ""
    for p in (1, 2):
        for n in (64, 256, 1024):
            forms = GroverClosedForms(n, make_schedule("beta", p=p))
            rel = abs(forms.j0_approximation - forms.j0_end) / forms.j0_end
            if rel > worst:
                worst, detail = rel, f"worst at p={p}, N={n}"
    return CheckResult("J_0(1) approximation within 5%", worst <= 0.05, worst, 0.05, detail)


def check_fisher_constant() -> CheckResult:
    """The optimal schedule keeps the ground-state Fisher speed constant."""
    n = 32
    forms = GroverClosedForms(n, optimal_schedule(n))
    samples = forms.fisher(np.linspace(0.0, 1.0, 1000))
    spread = float((samples.max() - samples.min()) / samples.mean())
    return CheckResult("constant Fisher information, optimal schedule", spread <= 1e-6, spread, 1e-6)


def check_geometry() -> list[CheckResult]:
    """Action >= (Bures length)^2, equality only at constant speed."""
    out = []
    n = 32
    for kind, p in (("linear", 0), ("beta", 1), ("beta", 2)):
        geo = fisher_geometry(n, make_schedule(kind, N=n, p=p))
        slack = geo.cauchy_schwarz_slack
        out.append(
            CheckResult(
                f"action bound strict, {kind}" + (f" p={p}" if p else ""),
                slack > 1e-6,
                slack,
                1e-6,
                f"K={geo.action:.6f} L^2={geo.bures_length**2:.6f}",
            )
        )
    geo = fisher_geometry(n, optimal_schedule(n))
    out.append(
        CheckResult(
            "action bound saturated, optimal",
            abs(geo.cauchy_schwarz_slack) <= 1e-9,
            abs(geo.cauchy_schwarz_slack),
            1e-9,
            f"L_shortest={geo.shortest_length:.6f}",
        )
    )
    return out


def check_ode_schedule() -> list[CheckResult]:
    """ODE-integrated constant-speed schedule against the closed form."""
    out = []
    grid = np.linspace(0.0, 1.0, 2001)
    for n in (8, 32):
        ode = schedule_from_constant_fisher(n)
        closed = optimal_schedule(n)
        sup = float(np.abs(ode(grid) - closed(grid)).max())
        out.append(
            CheckResult(f"constant-speed schedule ODE vs closed form, N={n}", sup <= 1e-8, sup, 1e-8)
        )
    return out


def check_recurrence_oracle() -> list[CheckResult]:
    """Recurrence aggregates against the closed-form coefficient pair."""
    out = []
    n = 8
    T = 137.0
    cases = [("linear", 0, "reduced2"), ("optimal", 0, "reduced2"),
             ("linear", 0, "fullN"), ("beta", 1, "reduced2")]
    for kind, p, mode in cases:
        sched = make_schedule(kind, N=n, p=p)
        family = grover_family(n, sched, mode=mode)
        forms = GroverClosedForms(n, sched)
        table = recurrence_table(family, 2)
        phase = np.exp(1j * T * forms.omega_end)
        lam1, lam0 = forms.lambda_10(1.0), forms.lambda_10(0.0)
        ld1, ld0 = forms.lambda_dot_10(1.0), forms.lambda_dot_10(0.0)
        b1_closed = phase * lam1 - lam0
        b2_closed = phase * (forms.j0_end * lam1 + ld1) - (-forms.j0_end * lam0 + ld0)
        agg1 = complex(table.aggregate(1, T)[1])
        agg2 = complex(table.aggregate(2, T)[1])
        tag = f"{kind}" + (f" p={p}" if p else "") + f" {mode}"
        if kind == "beta":
            # leading coefficient vanishes at s=1; gauge it against grid error
            bound = 10.0 * max(table.grid_error, 1e-15)
            out.append(
                CheckResult(
                    f"recurrence: vanishing first order, {tag}",
                    abs(agg1) <= bound,
                    abs(agg1),
                    bound,
                )
            )
            err2 = abs(agg2 - b2_closed) / abs(b2_closed)
            out.append(
                CheckResult(f"recurrence vs closed form b2, {tag}", err2 <= 1e-6, err2, 1e-6)
            )
        else:
            err1 = abs(agg1 - b1_closed) / abs(b1_closed)
            err2 = abs(agg2 - b2_closed) / abs(b2_closed)
            worst = max(err1, err2)
            out.append(
                CheckResult(
                    f"recurrence vs closed forms, {tag}",
                    worst <= 1e-6,
                    worst,
                    1e-6,
                    f"b1 err {err1:.2e}, b2 err {err2:.2e}",
                )
            )
    return out


def check_fig1_tightness() -> list[CheckResult]:
    """Optimal schedule at N=32, C=9.5: bound holds and touches the peaks."""
    n, C = 32, 9.5
    sched = make_schedule("optimal", n)
    family = grover_family(n, sched)
    trade = closed_tradeoff(n, "optimal", C=C)
    omega = GroverClosedForms(n, sched).omega_end
    t_values = np.logspace(math.log10(trade.T_val), math.log10(8 * trade.T_val), 20)
    ratios, peak_ratios = [], []
    for T in t_values:
        eps = propagate(family, T, tol=1e-10).final_distance
        ratios.append(eps / trade.bound(T))
        if abs(math.sin(0.5 * T * omega)) >= 0.9:
            peak_ratios.append(eps / trade.bound(T))
    worst = max(ratios)
    out = [
        CheckResult(
            "error below closed-form bound, optimal N=32",
            worst <= 1.0,
            worst,
            1.0,
            f"{len(t_values)} run times in [T_val, 8 T_val]",
        )
    ]
    tight = min(peak_ratios)
    out.append(
        CheckResult(
            "bound tight at oscillation peaks, optimal N=32",
            tight >= 0.5,
            tight,
            0.5,
            f"{len(peak_ratios)} near-peak points",
        )
    )
    return out


def check_fig2_convergence() -> CheckResult:
    """Linear schedule at N=32, C=50: numeric error locks onto the leading term."""
    n, C = 32, 50.0
    sched = make_schedule("linear")
    family = grover_family(n, sched)
    trade = closed_tradeoff(n, "linear", C=C)
    omega = GroverClosedForms(n, sched).omega_end
    t_values = np.logspace(math.log10(trade.T_val), math.log10(8 * trade.T_val), 20)
    worst = 0.0
    used = 0
    for T in t_values:
        if T < 2 * trade.T_val:
            continue
        phase = T * omega
        if abs(phase - 2 * math.pi * round(phase / (2 * math.pi))) < 0.5:
            continue  # zero-measure resonance window, excluded from claims
        eps = propagate(family, T, tol=1e-10).final_distance
        lead = apt.leading_distance(family, 1.0, T)
        worst = max(worst, abs(eps - lead) / lead)
        used += 1
    return CheckResult(
        "numeric converges to leading term, linear N=32",
        worst <= 0.10,
        worst,
        0.10,
        f"{used} run times in [2 T_val, 8 T_val], resonance windows excluded",
    )


def check_remainder_plateau() -> CheckResult:
    """T^2 (eps_numeric - eps_leading) plateaus over octave-spaced run times.

    N=8 linear.  The remainder carries an oscillatory, exponentially
    decaying transient that dominates below T ~ 450 here; N=8 is also
    the near-cancellation point of the linear validity expression
    (|2N-17| = 1), which makes T_val anomalously small for a given
    accuracy constant.  C = 1600 places T_val past the transient, and
    the run times are locked to the resonance comb so the remainder's
    oscillatory envelope is sampled at fixed phase.
    """
    n = 8
    sched = make_schedule("linear")
    family = grover_family(n, sched)
    t_val = closed_tradeoff(n, "linear", C=1600.0).T_val
    comb = resonance_times(n, sched, 512)
    t0 = comb[np.searchsorted(comb, t_val)]
    values = []
    for mult in (1, 2, 4, 8):
        T = mult * t0
        eps = propagate(family, T, tol=1e-11).final_distance
        lead = apt.leading_distance(family, 1.0, T)
        values.append(T * T * abs(eps - lead))
    ratio = max(values) / min(values)
    return CheckResult(
        "1/T^2 remainder plateau, linear N=8",
        ratio < 2.0,
        ratio,
        2.0,
        f"T in {[round(float(mult * t0), 1) for mult in (1, 2, 4, 8)]}, "
        f"T^2 remainder {['%.4f' % v for v in values]}",
    )


def check_resonance_scaling() -> CheckResult:
    """Error at the resonance comb falls off as 1/T^2 (slope -2 +- 0.1)."""
    n = 4
    sched = make_schedule("optimal", n)
    family = grover_family(n, sched)
    t_n = resonance_times(n, sched, 10)[1:]  # n = 2..10
    eps = [propagate(family, T, tol=1e-11).final_distance for T in t_n]
    slope = _fit(t_n, eps)
    return CheckResult(
        "resonance-time scaling, optimal N=4",
        abs(slope + 2.0) <= 0.1,
        abs(slope + 2.0),
        0.1,
        f"log-log slope {slope:.4f} over T_2..T_10",
    )


def check_reduced_vs_full() -> list[CheckResult]:
    """Two-level reduction against the full N-dimensional model."""
    out = []
    for n in (4, 8, 16):
        trade = closed_tradeoff(n, "linear", C=50.0)
        T = 5.0 * trade.T_val
        sched = make_schedule("linear")
        eps_r = propagate(grover_family(n, sched, mode="reduced2"), T, tol=1e-11).final_distance
        eps_f = propagate(grover_family(n, sched, mode="fullN"), T, tol=1e-11).final_distance
        diff = abs(eps_r - eps_f)
        out.append(
            CheckResult(
                f"reduced vs full model, N={n}",
                diff <= 1e-9,
                diff,
                1e-9,
                f"T={T:.1f}, eps={eps_r:.3e}",
            )
        )
    return out


def check_literature_ordering() -> CheckResult:
    """The published general bound sits above the closed-form one."""
    n = 32
    trade = closed_tradeoff(n, "optimal", C=9.5)
    t_values = np.logspace(math.log10(trade.T_val), math.log10(8 * trade.T_val), 20)
    margin = min(
        literature_bounds(n, T=T).jansen_eps - trade.bound(T) for T in t_values
    )
    return CheckResult(
        "literature bound above closed-form bound, N=32",
        margin >= 0.0,
        margin,
        0.0,
    )


ALL_CHECKS = [
    check_optimal_scaling,
    check_linear_scaling,
    check_beta_scaling,
    check_beta_j0_approximation,
    check_fisher_constant,
    check_geometry,
    check_ode_schedule,
    check_recurrence_oracle,
    check_fig1_tightness,
    check_fig2_convergence,
    check_remainder_plateau,
    check_resonance_scaling,
    check_reduced_vs_full,
    check_literature_ordering,
]


def run_all(checks=None) -> list[CheckResult]:
    results = []
    for check in checks or ALL_CHECKS:
        outcome = check()
        if isinstance(outcome, CheckResult):
            results.append(outcome)
        else:
            results.extend(outcome)
    return results
