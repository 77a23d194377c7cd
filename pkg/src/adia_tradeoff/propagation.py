"""Exact propagation of the rescaled Schroedinger equation.

Integrates (i/T) d psi/ds = H(s) psi from the instantaneous ground
state at s = 0 (hbar = 1, energies dimensionless), recording the Bures
angle to the freshly diagonalized ground state along the way.  The
stepper is a fourth-order commutator-free Magnus scheme built from
exact matrix exponentials, so each step is unitary and the norm is a
pure diagnostic.  Accuracy is controlled by step doubling: the run is
accepted once the final state moves by less than the tolerance under
halving the step.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernel
from .errors import StepSizeUnderflow, ZeroVector
from .families import HamiltonianFamily, InterpolatingFamily
from .recurrence import CoefficientTable

__all__ = ["SimulationTrace", "propagate", "bures_angle", "truncated_state"]

DEFAULT_TOL = 1e-9
DEFAULT_OUTPUT_POINTS = 129
MAX_REFINEMENTS = 10


def bures_angle(a: np.ndarray, b: np.ndarray) -> float:
    """arccos(|<b|a>| / ||a||) for normalized b and any nonzero a.

    Evaluated as arctan2 of the orthogonal component against the
    overlap, which keeps full precision for nearly parallel states.
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    norm_a = np.linalg.norm(a)
    if norm_a < 1e-300:
        raise ZeroVector("cannot measure the angle of a zero vector")
    if abs(np.linalg.norm(b) - 1.0) > 1e-8:
        raise ValueError("reference state must be normalized")
    overlap = np.vdot(b, a)
    residual = a - overlap * b
    return float(np.arctan2(np.linalg.norm(residual), abs(overlap)))


@dataclass(frozen=True)
class SimulationTrace:
    """One propagation run.

    distances[i] is the Bures angle between the state at s_grid[i] and
    the instantaneous ground state there; norms are the (diagnostic)
    state norms, preserved to roundoff by the unitary stepper.
    """

    T: float
    tol: float
    s_grid: np.ndarray
    states: np.ndarray
    norms: np.ndarray
    distances: np.ndarray
    n_steps: int
    backend: str

    @property
    def final_distance(self) -> float:
        return float(self.distances[-1])

    @property
    def norm_drift(self) -> float:
        return float(np.abs(self.norms - 1.0).max())

    def write_csv(self, path, include_components: bool = False) -> None:
        d = self.states.shape[1]
        header = "s,norm,distance"
        if include_components:
            header += "".join(f",re_{k},im_{k}" for k in range(d))
        lines = [header]
        for i, s in enumerate(self.s_grid):
            row = [repr(float(s)), repr(float(self.norms[i])), repr(float(self.distances[i]))]
            if include_components:
                for k in range(d):
                    row.append(repr(float(self.states[i, k].real)))
                    row.append(repr(float(self.states[i, k].imag)))
            lines.append(",".join(row))
        with open(path, "w") as fh:
            fh.write("\n".join(lines) + "\n")


def _ground_state(family, s):
    _, vectors = np.linalg.eigh(family.eval(s, 0))
    phi = vectors[:, 0]
    pivot = phi[np.argmax(np.abs(phi))]
    if abs(pivot) > 0:
        phi = phi * (np.conj(pivot) / abs(pivot))
    return phi.astype(complex)


def _initial_steps(T: float, tol: float, segments: int) -> int:
    # fourth-order scheme: global error ~ kappa T^3 h^4
    kappa = 2e-3
    n = int(math.ceil((kappa * max(T, 1.0) ** 3 / tol) ** 0.25))
    n = max(n, 8 * segments, 256)
    return ((n + segments - 1) // segments) * segments


def _run_interp(family, T, n_steps, marks):
    h = 1.0 / n_steps
    s0 = np.arange(n_steps) * h
    f_c1 = np.asarray(family.schedule(s0 + _kernel.GAUSS_C1 * h))
    f_c2 = np.asarray(family.schedule(s0 + _kernel.GAUSS_C2 * h))
    f1, f2 = _kernel.effective_f(f_c1, f_c2)
    theta = T * h / 2.0
    psi0 = _ground_state(family, 0.0)
    if family.dimension == 2:
        return _kernel.su2_interp_propagate(
            family.h_initial.astype(complex),
            family.h_final.astype(complex),
            f1,
            f2,
            theta,
            psi0,
            marks,
        )
    return _kernel.dense_interp_propagate(
        family.h_initial, family.h_final, f1, f2, theta, psi0, marks
    )


def _run_generic(family, T, n_steps, marks):
    # non-interpolating families: substep generators assembled per step
    h = 1.0 / n_steps
    theta = T * h / 2.0
    psi = _ground_state(family, 0.0)
    out = np.empty((len(marks), family.dimension), dtype=complex)
    j = 0
    w1, w2 = 2.0 * _kernel.pure.WEIGHT_1, 2.0 * _kernel.pure.WEIGHT_2
    for k in range(n_steps):
        s = k * h
        h_a = family.eval(s + _kernel.GAUSS_C1 * h, 0)
        h_b = family.eval(s + _kernel.GAUSS_C2 * h, 0)
        for gen in (w1 * h_a + w2 * h_b, w2 * h_a + w1 * h_b):
            evals, evecs = np.linalg.eigh(gen)
            psi = evecs @ (np.exp(-1j * theta * evals) * (evecs.conj().T @ psi))
        if j < len(marks) and marks[j] == k + 1:
            out[j] = psi
            j += 1
    return out


def propagate(
    family: HamiltonianFamily,
    T: float,
    tol: float = DEFAULT_TOL,
    s_points: int = DEFAULT_OUTPUT_POINTS,
    max_refinements: int = MAX_REFINEMENTS,
) -> SimulationTrace:
    """Propagate from the ground state at s=0 over the full drive.

    The run is accepted once halving the step changes the final state
    by at most ``tol`` (2-norm); otherwise StepSizeUnderflow is raised
    after ``max_refinements`` doublings.
    """
    if T <= 0:
        raise ValueError("T must be positive")
    s_grid = np.linspace(0.0, 1.0, s_points)
    segments = s_points - 1
    runner = _run_interp if isinstance(family, InterpolatingFamily) else _run_generic

    n = _initial_steps(T, tol, segments)
    marks = np.arange(1, segments + 1) * (n // segments)
    states = runner(family, T, n, marks)
    for _ in range(max_refinements):
        n2 = 2 * n
        marks2 = np.arange(1, segments + 1) * (n2 // segments)
        states2 = runner(family, T, n2, marks2)
        if np.linalg.norm(states2[-1] - states[-1]) <= tol:
            n, states = n2, states2
            break
        n, states = n2, states2
    else:
        raise StepSizeUnderflow(
            f"propagation at T={T} did not meet tol={tol} within "
            f"{max_refinements} refinements (n={n})"
        )

    all_states = np.vstack([_ground_state(family, 0.0)[None, :], states])
    norms = np.linalg.norm(all_states, axis=1)
    distances = np.array(
        [
            bures_angle(all_states[i], _ground_state(family, s))
            for i, s in enumerate(s_grid)
        ]
    )
    return SimulationTrace(
        T=float(T),
        tol=float(tol),
        s_grid=s_grid,
        states=all_states,
        norms=norms,
        distances=distances,
        n_steps=n,
        backend=_kernel.active_backend(),
    )


def truncated_state(table: CoefficientTable, s: float, T: float, order: int) -> np.ndarray:
    """Assemble the truncated eigenbasis expansion at (s, T).

    psi = sum_n e^{-i T omega_n(s)} [sum_{p <= order} (i/T)^p b_n^(p)(s)]
          phi_n(s); the result is intentionally not normalized (the
    truncation does not preserve the norm).
    """
    if order > table.order_max:
        raise ValueError(f"table holds orders up to {table.order_max}")
    index = table.index_of(s)
    d = table.dimension
    coeff = np.zeros(d, dtype=complex)
    for p in range(order + 1):
        coeff += (1j / T) ** p * table.aggregate(p, T, index)
    phases = np.exp(-1j * T * table.omega[:, index])
    return table.vectors[index] @ (phases * coeff)
