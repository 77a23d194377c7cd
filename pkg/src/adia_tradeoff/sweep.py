"""Sweep execution: numerics, bounds and closed forms per run time.

A sweep propagates one configured model over a list of run times and
collects, per T, the numerically exact error, the leading-order error,
the oscillation-free bounds, the validity data and the literature
comparison values.  Sweep points execute concurrently up to the
configured job count; output assembly is single-threaded and ordered,
so results are deterministic.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import apt
from ._kernel import active_backend
from .config import RunConfig, SweepRecord, parse_matrix_file
from .errors import ConfigError
from .families import interpolating_family
from .grover import closed_tradeoff, default_C, grover_family, make_schedule
from .propagation import propagate

__all__ = ["build_family", "run_sweep", "closed_forms_records"]

RESONANCE_PHASE_WINDOW = 0.5  # radians around multiples of 2 pi


def build_family(config: RunConfig):
    schedule = make_schedule(config.schedule, N=config.N, p=config.p)
    if config.model == "grover-reduced":
        return grover_family(config.N, schedule, mode="reduced2")
    if config.model == "grover-full":
        return grover_family(config.N, schedule, mode="fullN", marked=config.marked)
    h_i, h_f = parse_matrix_file(config.matrix_file)
    if h_i.shape[0] != config.N:
        raise ConfigError(
            f"N: {config.N} does not match matrix dimension {h_i.shape[0]}"
        )
    try:
        return interpolating_family(h_i, h_f, schedule, label="custom")
    except ValueError as exc:
        raise ConfigError(f"matrix_file: {exc}") from None


def _tradeoff_for(config: RunConfig, family, C: float):
    if config.model in ("grover-reduced", "grover-full"):
        return closed_tradeoff(config.N, config.schedule, C=C, p=config.p)
    if config.p >= 1:
        return apt.bc_tradeoff(family, config.p, C, tol=config.quad_tol)
    return apt.tradeoff(family, 1.0, C, tol=config.quad_tol)


def _resonance_near(T: float, omega: float) -> bool:
    if omega <= 0:
        return False
    phase = T * omega
    return abs(phase - 2.0 * math.pi * round(phase / (2.0 * math.pi))) < RESONANCE_PHASE_WINDOW


def run_sweep(config: RunConfig):
    """Execute one sweep; returns (records, summary)."""
    config.validate()
    family = build_family(config)
    C = config.C if config.C is not None else default_C(config.schedule, config.p)
    trade = _tradeoff_for(config, family, C)
    t_values = config.resolve_T_values(trade.T_val)

    # phase-explicit first order: one evaluation serves every T
    first = apt._first_order(family, 1.0)
    omega_gap = float(first.coeffs[0].frequencies[0])
    grover = config.model in ("grover-reduced", "grover-full")
    jansen_coeff = (math.pi / 2 + math.pi**2) * math.sqrt(config.N)
    roland_coeff = (math.pi / 2) * math.sqrt(config.N)

    def run_one(T: float) -> float:
        return propagate(family, T, tol=config.integrator_tol).final_distance

    with ThreadPoolExecutor(max_workers=config.jobs) as pool:
        eps_numeric = list(pool.map(run_one, t_values))

    records = []
    for T, eps_num in zip(t_values, eps_numeric):
        vals = first.at(T)
        eps_lead = float(np.sqrt(np.sum(np.abs(vals) ** 2)) / T)
        lo_sq = hi_sq = 0.0
        for c in first.coeffs:
            a_s, a_0 = abs(c.amplitudes[0]), abs(c.amplitudes[1])
            hi_sq += (a_s + a_0) ** 2
            lo_sq += (a_s - a_0) ** 2
        eps_upper = math.sqrt(hi_sq) / T
        eps_lower = math.sqrt(lo_sq) / T
        flags = []
        if T < trade.T_val:
            flags.append("below-validity")
        if _resonance_near(T, omega_gap):
            flags.append("resonance-near")
        records.append(
            SweepRecord(
                N=config.N,
                schedule=config.schedule,
                p=config.p,
                C=C,
                T=float(T),
                eps_numeric=float(eps_num),
                eps_leading=eps_lead,
                eps_upper=eps_upper,
                eps_lower=eps_lower,
                T_val=trade.T_val,
                eps_tilde=trade.eps_tilde,
                jansen=jansen_coeff / T if grover else None,
                roland_T=(roland_coeff / eps_upper) if (grover and eps_upper > 0) else None,
                flags=flags,
            )
        )
    records.sort(key=lambda r: (r.N, r.T))
    summary = _summarize(config, trade, records)
    return records, summary


def _fit_exponent(xs, ys):
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    keep = (xs > 0) & (ys > 0)
    if keep.sum() < 2:
        return None
    return float(np.polyfit(np.log(xs[keep]), np.log(ys[keep]), 1)[0])

def _summarize(config: RunConfig, trade, records) -> dict:
    clean = [r for r in records if not r.flags]
    summary = {
        "config": config.as_dict(),
        "backend": active_backend(),
        "C": trade.C,
        "p": trade.p,
        "T_val": trade.T_val,
        "eps_tilde": trade.eps_tilde,
        "bound_coeff": trade.bound_coeff,
        "n_records": len(records),
        "exponents": {
            "eps_upper_vs_T": _fit_exponent(
                [r.T for r in records], [r.eps_upper for r in records]
            ),
            "eps_numeric_vs_T": _fit_exponent(
                [r.T for r in clean], [r.eps_numeric for r in clean]
            ),
        },
    }
    return summary


def closed_forms_records(n_values, schedule_kind: str, C: float | None = None, p: int = 0):
    """Closed-form trade-offs across database sizes, in the v1 schema.

    One record per N, anchored at T = T_val; the numeric columns stay
    empty.  The summary carries the fitted scaling exponents of T_val
    and eps_tilde against N.
    """
    if C is None:
        C = default_C(schedule_kind, p)
    records = []
    extras = {}
    for n in n_values:
        trade = closed_tradeoff(int(n), schedule_kind, C=C, p=p)
        t_val = trade.T_val
        records.append(
            SweepRecord(
                N=int(n),
                schedule=schedule_kind,
                p=p,
                C=C,
                T=t_val,
                eps_numeric=None,
                eps_leading=None,
                eps_upper=trade.bound(t_val),
                eps_lower=0.0,
                T_val=t_val,
                eps_tilde=trade.eps_tilde,
                jansen=(math.pi / 2 + math.pi**2) * math.sqrt(n) / t_val,
                roland_T=(math.pi / 2) * math.sqrt(n) / trade.eps_tilde,
                flags=[],
            )
        )
        if trade.extra.get("j0_exact") is not None:
            extras[str(int(n))] = {
                "j0_exact": trade.extra["j0_exact"],
                "j0_approximation": trade.extra["j0_approximation"],
            }
    records.sort(key=lambda r: (r.N, r.T))
    summary = {
        "schedule": schedule_kind,
        "p": p,
        "C": C,
        "N_values": [int(n) for n in n_values],
        "exponents": {
            "T_val_vs_N": _fit_exponent([r.N for r in records], [r.T_val for r in records]),
            "eps_tilde_vs_N": _fit_exponent(
                [r.N for r in records], [r.eps_tilde for r in records]
            ),
        },
    }
    if extras:
        summary["j0"] = extras
    return records, summary
