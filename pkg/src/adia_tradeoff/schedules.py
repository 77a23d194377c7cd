"""Driving schedules f(s) on s in [0, 1].

A schedule is a monotone profile with f(0) = 0 and f(1) = 1 mixing the
initial and final Hamiltonians, together with its s-derivatives up to
``max_deriv``.  The built-in families are

* ``linear``   -- f(s) = s,
* ``optimal``  -- the constant-Fisher-speed profile
  f(s) = [1 + tan(arctan(sqrt(N-1)) (2s-1)) / sqrt(N-1)] / 2,
* ``beta``     -- the regularized incomplete beta function
  f_p(s) = I_s(p+1, p+1), the minimal-order polynomial whose first p
  derivatives vanish at both endpoints.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from numpy.polynomial import polynomial as npoly

__all__ = [
    "Schedule",
    "linear_schedule",
    "optimal_schedule",
    "beta_schedule",
    "custom_schedule",
]

ENDPOINT_TOL = 1e-9
MONOTONE_SAMPLES = 1001


@dataclass(frozen=True)
class Schedule:
    """A driving profile and its analytic derivatives.

    Calling the schedule evaluates f^(deriv)(s); scalar or array ``s``
    are both accepted.
    """

    kind: str
    p: int
    max_deriv: int
    _eval: Callable = field(repr=False)

    def __call__(self, s, deriv: int = 0):
        if deriv < 0:
            raise ValueError("derivative order must be >= 0")
        if deriv > self.max_deriv:
            raise ValueError(
                f"schedule {self.kind!r} provides derivatives up to order "
                f"{self.max_deriv}, got {deriv}"
            )
        return self._eval(s, deriv)

    def check(self, samples: int = MONOTONE_SAMPLES) -> None:
        """Verify f(0)=0, f(1)=1 and monotonicity on a sampled grid."""
        f0 = float(self(0.0))
        f1 = float(self(1.0))
        if abs(f0) > ENDPOINT_TOL or abs(f1 - 1.0) > ENDPOINT_TOL:
            raise ValueError(
                f"schedule {self.kind!r} endpoints f(0)={f0}, f(1)={f1}"
            )
        grid = np.linspace(0.0, 1.0, samples)
        vals = np.asarray(self(grid))
        if np.any(np.diff(vals) < -1e-12):
            raise ValueError(f"schedule {self.kind!r} is not monotone")


def linear_schedule() -> Schedule:
    """f(s) = s."""

    def evaluate(s, deriv):
        s = np.asarray(s, dtype=float)
        if deriv == 0:
            out = s.copy()
        elif deriv == 1:
            out = np.ones_like(s)
        else:
            out = np.zeros_like(s)
        return out if out.ndim else float(out)

    return Schedule(kind="linear", p=0, max_deriv=64, _eval=evaluate)


def optimal_schedule(N: int, max_deriv: int = 8) -> Schedule:
    """Constant-Fisher-speed profile for an N-item search.

    f(s) = [1 + tan(arctan(sqrt(N-1)) (2s-1)) / sqrt(N-1)] / 2.

    Derivatives are exact: with t = tan(L(2s-1)) and L = arctan(sqrt(N-1)),
    dt/ds = 2L(1+t^2), so every d^j f/ds^j is a polynomial in t.
    """
    if N < 2:
        raise ValueError("N must be >= 2")
    L = math.atan(math.sqrt(N - 1))
    root = math.sqrt(N - 1)

    # polys[j] holds the coefficients (low to high in t) of d^j t / ds^j
    polys = [np.array([0.0, 1.0])]
    for _ in range(max_deriv):
        prev = polys[-1]
        polys.append(2.0 * L * npoly.polymul(npoly.polyder(prev), [1.0, 0.0, 1.0]))

    def evaluate(s, deriv):
        s = np.asarray(s, dtype=float)
        t = np.tan(L * (2.0 * s - 1.0))
        val = npoly.polyval(t, polys[deriv]) / (2.0 * root)
        if deriv == 0:
            val = val + 0.5
        return val if val.ndim else float(val)

    return Schedule(kind="optimal", p=0, max_deriv=max_deriv, _eval=evaluate)


def beta_schedule(p: int) -> Schedule:
    """Boundary-cancelation polynomial f_p(s) = I_s(p+1, p+1).

    The derivative profile is s^p (1-s)^p normalized to unit integral;
    the first p derivatives of f_p vanish at s = 0 and s = 1, and
    |f_p^(p+1)(1)| = (2p+1)!/p!.
    """
    if p < 0:
        raise ValueError("p must be >= 0")
    # fdot coefficients: s^p (1-s)^p / B(p+1, p+1), exact integer arithmetic
    norm = math.factorial(2 * p + 1) // (math.factorial(p) * math.factorial(p))
    fdot = np.zeros(2 * p + 1)
    for k in range(p + 1):
        fdot[p + k] = (-1) ** k * math.comb(p, k) * norm
    derivs = [npoly.polyint(fdot), fdot]
    while len(derivs) <= 2 * p + 1:
        derivs.append(npoly.polyder(derivs[-1]))

    def evaluate(s, deriv):
        s = np.asarray(s, dtype=float)
        if deriv >= len(derivs):
            out = np.zeros_like(s)
        else:
            out = npoly.polyval(s, derivs[deriv])
        return out if out.ndim else float(out)

    return Schedule(kind="beta", p=p, max_deriv=64, _eval=evaluate)


def custom_schedule(fn: Callable, max_deriv: int, kind: str = "custom", p: int = 0) -> Schedule:
    """Wrap a user-supplied callable fn(s, deriv) as a Schedule."""

    def evaluate(s, deriv):
        s = np.asarray(s, dtype=float)
        out = np.asarray(fn(s, deriv), dtype=float)
        return out if out.ndim else float(out)

    sched = Schedule(kind=kind, p=p, max_deriv=max_deriv, _eval=evaluate)
    sched.check()
    return sched
