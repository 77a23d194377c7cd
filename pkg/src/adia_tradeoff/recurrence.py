"""General-order coefficient tables via the eigenbasis recurrence.

Writing each expansion coefficient as b_n^(p)(s) = sum_m e^{i T
omega_nm(s)} b_nm^(p)(s) turns the Schroedinger equation into the
recurrence

    Delta_nm(s) b_nm^(p+1)(s) = d/ds b_nm^(p)(s)
                                + sum_{k != n} M_nk(s) b_km^(p)(s)

for the off-diagonal entries, while the diagonal ones solve

    b_nn^(p)(s) = b_nn^(p)(0) - int_0^s sum_{k != n} M_nk b_kn^(p) ds'

with initial conditions b_nm^(0) = delta_n0 delta_nm (the adiabatic
approximation) and sum_m b_nm^(p)(0) = 0 for p >= 1.  The stored
entries are T-independent; aggregation applies the e^{i T omega_nm}
factors, so one table serves every run time.

Off-diagonal s-derivatives use 5-point stencils (one-sided at the
endpoints) on a uniform grid; diagonal integrals use cumulative
Simpson.  A grid-halving pass estimates the grid error and gates it.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import cumulative_simpson

from .errors import DegenerateBlockCoupling, GridTooCoarse
from .families import HamiltonianFamily
from .spectral import DEGENERACY_THRESHOLD, dynamical_phases_on_grid, frame_path

__all__ = ["CoefficientTable", "recurrence_table", "default_grid"]

MAX_ORDER = 4
DEFAULT_GRID_POINTS = 1601


def default_grid(points: int = DEFAULT_GRID_POINTS) -> np.ndarray:
    return np.linspace(0.0, 1.0, points)


@dataclass(frozen=True)
class CoefficientTable:
    """Phase-explicit coefficients b_nm^(p) on an s-grid.

    Attributes
    ----------
    s_grid : (g,) ordered dimensionless times.
    entries : (P+1, d, d, g) complex, b_nm^(p)(s_i).
    omega : (d, g) dynamical phases omega_n(s_i).
    energies : (g, d) instantaneous eigenvalues.
    vectors : (g, d, d) gauge-continuous eigenvectors.
    grid_error : float, grid-halving estimate of the entry error.
    default_T : float or None, run time used by convenience aggregates.
    """

    s_grid: np.ndarray
    entries: np.ndarray
    omega: np.ndarray
    energies: np.ndarray
    vectors: np.ndarray
    grid_error: float
    default_T: float | None = None

    @property
    def order_max(self) -> int:
        return self.entries.shape[0] - 1

    @property
    def dimension(self) -> int:
        return self.entries.shape[1]

    def index_of(self, s: float) -> int:
        i = int(np.argmin(np.abs(self.s_grid - s)))
        if abs(self.s_grid[i] - s) > 1e-9:
            raise ValueError(f"s={s} is not a grid point")
        return i

    def _phases(self, T: float, index: int) -> np.ndarray:
        om = self.omega[:, index]
        return np.exp(1j * T * (om[:, None] - om[None, :]))

    def aggregate(self, p: int, T: float | None = None, index: int = -1) -> np.ndarray:
        """b_n^(p)(s_index) = sum_m e^{i T omega_nm} b_nm^(p)(s_index)."""
        T = self.default_T if T is None else T
        if T is None:
            raise ValueError("no run time given and no default_T set")
        return np.sum(self._phases(T, index) * self.entries[p, :, :, index], axis=1)

    def aggregate_dT(self, p: int, T: float | None = None, index: int = -1) -> np.ndarray:
        """Derivative of the aggregate with respect to T."""
        T = self.default_T if T is None else T
        om = self.omega[:, index]
        nu = om[:, None] - om[None, :]
        return np.sum(
            1j * nu * np.exp(1j * T * nu) * self.entries[p, :, :, index], axis=1
        )

    def aggregate_on_grid(self, p: int, T: float | None = None) -> np.ndarray:
        """(d, g) aggregated coefficients at every grid point."""
        T = self.default_T if T is None else T
        nu = self.omega[:, None, :] - self.omega[None, :, :]
        return np.sum(np.exp(1j * T * nu) * self.entries[p], axis=1)

    def max_moduli(self, p: int, index: int = -1) -> np.ndarray:
        """Per-level sum_m |b_nm^(p)|, the maximum-modulus envelope."""
        return np.sum(np.abs(self.entries[p, :, :, index]), axis=1)

    def with_default_T(self, T: float) -> "CoefficientTable":
        return CoefficientTable(
            self.s_grid, self.entries, self.omega, self.energies, self.vectors,
            self.grid_error, float(T),
        )


def _derivative(values: np.ndarray, h: float) -> np.ndarray:
    """Fourth-order derivative along the last axis (uniform spacing)."""
    out = np.empty_like(values)
    out[..., 2:-2] = (
        values[..., :-4]
        - 8.0 * values[..., 1:-3]
        + 8.0 * values[..., 3:-1]
        - values[..., 4:]
    ) / (12.0 * h)
    stencil = np.array([-25.0, 48.0, -36.0, 16.0, -3.0]) / (12.0 * h)
    out[..., 0] = np.tensordot(values[..., 0:5], stencil, axes=([-1], [0]))
    out[..., 1] = np.tensordot(values[..., 1:6], stencil, axes=([-1], [0]))
    out[..., -1] = -np.tensordot(values[..., -1:-6:-1], stencil, axes=([-1], [0]))
    out[..., -2] = -np.tensordot(values[..., -2:-7:-1], stencil, axes=([-1], [0]))
    return out


def _cumulative(values: np.ndarray, s_grid: np.ndarray) -> np.ndarray:
    if np.iscomplexobj(values):
        return cumulative_simpson(values.real, x=s_grid, initial=0.0) + 1j * (
            cumulative_simpson(values.imag, x=s_grid, initial=0.0)
        )
    return cumulative_simpson(values, x=s_grid, initial=0.0)


def _solve(family: HamiltonianFamily, order: int, s_grid: np.ndarray):
    frames = frame_path(family, s_grid)
    d = family.dimension
    g = len(s_grid)
    h = s_grid[1] - s_grid[0]
    energies = np.stack([f.energies for f in frames])            # (g, d)
    vectors = np.stack([f.vectors for f in frames])              # (g, d, d)
    couplings = np.stack([f.couplings for f in frames])          # (g, d, d)
    omega = dynamical_phases_on_grid(family, s_grid)

    delta = energies[:, :, None] - energies[:, None, :]          # (g, n, m)
    scale = max(1.0, float(np.abs(energies).max()))
    resolvable = np.abs(delta) >= DEGENERACY_THRESHOLD * scale
    safe_delta = np.where(resolvable, delta, 1.0)

    b = np.zeros((order + 1, d, d, g), dtype=complex)
    b[0, 0, 0, :] = 1.0
    off_diag = ~np.eye(d, dtype=bool)

    for p in range(order):
        num = _derivative(b[p], h)
        num += np.einsum("gnk,kmg->nmg", couplings, b[p])
        nxt = num / np.moveaxis(safe_delta, 0, -1)
        # degenerate pairs: entry must vanish identically, verified
        bad = (~resolvable.transpose(1, 2, 0)) & (
            np.abs(num) > 1e-8 * max(1.0, float(np.abs(b[p]).max()))
        )
        bad &= off_diag[:, :, None]
        if np.any(bad):
            n_idx, m_idx, _ = np.nonzero(bad)
            raise DegenerateBlockCoupling(
                f"recurrence entry b_{n_idx[0]}{m_idx[0]} couples degenerate "
                "levels; family outside supported class"
            )
        nxt[~resolvable.transpose(1, 2, 0)] = 0.0
        nxt[np.eye(d, dtype=bool)] = 0.0
        # diagonal entries from the integral form
        integrand = np.einsum("gnk,kng->ng", couplings, nxt)
        cumulative = _cumulative(integrand, s_grid)
        start = -np.sum(nxt[:, :, 0], axis=1)
        diag = start[:, None] - cumulative
        for n in range(d):
            nxt[n, n, :] = diag[n]
        b[p + 1] = nxt
    return b, omega, energies, vectors


def recurrence_table(
    family: HamiltonianFamily,
    order: int,
    s_grid: np.ndarray | None = None,
    T: float | None = None,
    check: bool = True,
    coarse_tol: float = 1e-6,
) -> CoefficientTable:
    """Coefficient table up to ``order`` on a uniform s-grid.

    With ``check`` enabled the table is recomputed on the halved grid
    and the worst entry difference becomes ``grid_error``; if it
    exceeds ``coarse_tol`` (relative to the entry scale) the grid is
    rejected with GridTooCoarse.
    """
    if not 1 <= order <= MAX_ORDER:
        raise ValueError(f"order must be in 1..{MAX_ORDER}")
    if s_grid is None:
        s_grid = default_grid()
    s_grid = np.asarray(s_grid, dtype=float)
    steps = np.diff(s_grid)
    if len(s_grid) < 9 or not np.allclose(steps, steps[0], rtol=1e-12, atol=1e-15):
        raise ValueError("s_grid must be uniform with at least 9 points")

    b, omega, energies, vectors = _solve(family, order, s_grid)

    grid_error = 0.0
    if check:
        if len(s_grid) % 2 == 0:
            raise ValueError("grid-halving check needs an odd number of points")
        b_half, *_ = _solve(family, order, s_grid[::2])
        grid_error = float(np.abs(b[1:, :, :, ::2] - b_half[1:]).max())
        scale = max(1.0, float(np.abs(b[1:]).max()))
        if grid_error > coarse_tol * scale:
            raise GridTooCoarse(
                f"grid-halving changes entries by {grid_error:.3e} "
                f"(> {coarse_tol:.1e} of scale {scale:.3e}); refine s_grid"
            )
    return CoefficientTable(
        s_grid=s_grid,
        entries=b,
        omega=omega,
        energies=energies,
        vectors=vectors,
        grid_error=grid_error,
        default_T=T,
    )
