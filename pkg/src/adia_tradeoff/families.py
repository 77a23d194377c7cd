"""Driven Hamiltonian families H(s) with analytic s-derivatives.

All energies are dimensionless (expressed in units of a reference
energy scale) and hbar = 1, so times carry units of hbar over that
scale.  The workhorse is the interpolating family
H(s) = (1 - f(s)) H_i + f(s) H_f, which covers the search model and
the custom matrix-file input.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .schedules import Schedule

__all__ = ["HamiltonianFamily", "InterpolatingFamily", "interpolating_family"]

HERMITICITY_TOL = 1e-12


def _check_hermitian(mat: np.ndarray, name: str) -> np.ndarray:
    mat = np.asarray(mat)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ValueError(f"{name} must be a square matrix")
    scale = max(1.0, float(np.abs(mat).max()))
    if np.abs(mat - mat.conj().T).max() > HERMITICITY_TOL * scale:
        raise ValueError(f"{name} is not Hermitian to tolerance")
    if np.isrealobj(mat) or np.abs(mat.imag).max() == 0.0:
        return np.ascontiguousarray(mat.real, dtype=float)
    return np.ascontiguousarray(mat, dtype=complex)


@dataclass(frozen=True)
class HamiltonianFamily:
    """Evaluator of H(s) and its s-derivatives on s in [0, 1].

    Parameters
    ----------
    dimension : int
        Hilbert-space dimension, at least 2.
    max_deriv : int
        Highest derivative order supported analytically.
    label : str
        Human-readable tag used in error messages and output files.
    """

    dimension: int
    max_deriv: int
    _eval: Callable = field(repr=False)
    label: str = ""

    def __post_init__(self):
        if self.dimension < 2:
            raise ValueError("dimension must be >= 2")

    def eval(self, s: float, deriv: int = 0) -> np.ndarray:
        """Return the d x d Hermitian matrix H^(deriv)(s)."""
        if not 0.0 <= s <= 1.0:
            raise ValueError(f"s={s} outside [0, 1]")
        if deriv < 0 or deriv > self.max_deriv:
            raise ValueError(
                f"derivative order {deriv} outside supported range "
                f"0..{self.max_deriv}"
            )
        return self._eval(s, deriv)


@dataclass(frozen=True)
class InterpolatingFamily(HamiltonianFamily):
    """H(s) = (1 - f(s)) H_i + f(s) H_f for a named schedule f.

    Derivatives are exact: H^(j)(s) = f^(j)(s) (H_f - H_i) for j >= 1.
    The structure (endpoint matrices plus schedule) is exposed so fast
    propagation kernels can exploit the affine dependence on f.
    """

    h_initial: np.ndarray = None
    h_final: np.ndarray = None
    schedule: Schedule = None


def interpolating_family(
    h_initial: np.ndarray,
    h_final: np.ndarray,
    schedule: Schedule,
    label: str = "",
) -> InterpolatingFamily:
    """Build the interpolating family (1 - f) H_i + f H_f."""
    hi = _check_hermitian(h_initial, "h_initial")
    hf = _check_hermitian(h_final, "h_final")
    if hi.shape != hf.shape:
        raise ValueError("h_initial and h_final must have the same shape")
    if hi.dtype != hf.dtype:
        hi = hi.astype(complex)
        hf = hf.astype(complex)
    hd = hf - hi

    def evaluate(s, deriv):
        if deriv == 0:
            f = float(schedule(s))
            return (1.0 - f) * hi + f * hf
        return float(schedule(s, deriv)) * hd

    return InterpolatingFamily(
        dimension=hi.shape[0],
        max_deriv=schedule.max_deriv,
        _eval=evaluate,
        label=label or f"interpolating-{schedule.kind}",
        h_initial=hi,
        h_final=hf,
        schedule=schedule,
    )
