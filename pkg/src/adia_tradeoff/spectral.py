"""Instantaneous eigenframes of driven Hamiltonians.

A frame holds the ascending eigenvalues, gauge-fixed eigenvectors and
the drive couplings

    M_nk(s) = <phi_n | d/ds phi_k> = -<phi_n | Hdot | phi_k> / (E_n - E_k)

of H(s) at a fixed s.  The gauge is the parallel-transport one,
<phi_n | d/ds phi_n> = 0, realized by (a) computing couplings from the
Hdot matrix element so eigenvector derivatives never get differenced
numerically, and (b) aligning the phases (and, inside degenerate
clusters, the basis) of consecutive frames.

Real-symmetric families keep real eigenvectors throughout, which makes
the geometric phase identically zero.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .errors import DegenerateBlockCoupling, DegenerateGroundGap, QuadratureFailure
from .families import HamiltonianFamily

__all__ = [
    "SpectralFrame",
    "spectral_frame",
    "frame_path",
    "dynamical_phase",
    "dynamical_phases_on_grid",
]

# Levels closer than this (relative to the spectral scale) are treated
# as a degenerate cluster.
DEGENERACY_THRESHOLD = 1e-9
# Allowed drive coupling inside a degenerate cluster before we refuse.
BLOCK_COUPLING_TOL = 1e-9


@dataclass(frozen=True)
class SpectralFrame:
    """Eigen-data of H(s) at one dimensionless time.

    Attributes
    ----------
    s : float
    energies : (d,) ascending eigenvalues.
    vectors : (d, d) orthonormal eigenvectors, one per column.
    couplings : (d, d) matrix M with M_nk = <phi_n|phidot_k>, M_nn = 0,
        anti-Hermitian by construction.
    hdot_elements : (d, d) matrix of <phi_n| Hdot |phi_k>.
    """

    s: float
    energies: np.ndarray
    vectors: np.ndarray
    couplings: np.ndarray
    hdot_elements: np.ndarray

    @property
    def dimension(self) -> int:
        return self.energies.shape[0]

    def gap(self, n: int, k: int = 0) -> float:
        """Delta_nk = E_n - E_k."""
        return float(self.energies[n] - self.energies[k])

    @property
    def ground_gap(self) -> float:
        return self.gap(1, 0)

    def lam(self, n: int, k: int = 0) -> complex:
        """lambda_nk = M_nk / Delta_nk (zero for uncoupled degenerate pairs)."""
        delta = self.energies[n] - self.energies[k]
        scale = max(1.0, float(np.abs(self.energies).max()))
        if abs(delta) < DEGENERACY_THRESHOLD * scale:
            return 0.0 if abs(self.couplings[n, k]) == 0.0 else np.nan
        return self.couplings[n, k] / delta


def _degenerate_clusters(energies: np.ndarray, threshold: float) -> list[list[int]]:
    clusters = [[0]]
    for i in range(1, len(energies)):
        if energies[i] - energies[i - 1] < threshold:
            clusters[-1].append(i)
        else:
            clusters.append([i])
    return clusters


def _canonical_gauge(vectors: np.ndarray) -> np.ndarray:
    """Deterministic per-column phase.

    The pivot is the first component whose modulus reaches half the
    maximum one (stable: the pivot can never be close to zero); its
    phase is rotated to the positive real axis.
    """
    v = vectors.copy()
    for k in range(v.shape[1]):
        mods = np.abs(v[:, k])
        j = int(np.argmax(mods >= 0.5 * mods.max()))
        pivot = v[j, k]
        if np.iscomplexobj(v):
            if pivot != 0:
                v[:, k] *= np.conj(pivot) / abs(pivot)
        elif pivot < 0:
            v[:, k] = -v[:, k]
    return v


def _align_to(vectors: np.ndarray, prev: np.ndarray, clusters) -> np.ndarray:
    """Gauge vectors for continuity with prev (cluster-wise Procrustes)."""
    v = vectors.copy()
    for cluster in clusters:
        if len(cluster) == 1:
            k = cluster[0]
            ov = np.vdot(v[:, k], prev[:, k])
            if np.iscomplexobj(v):
                if ov != 0:
                    v[:, k] *= ov / abs(ov)
            elif ov < 0:
                v[:, k] = -v[:, k]
        else:
            idx = np.ix_(range(v.shape[0]), cluster)
            overlap = v[idx].conj().T @ prev[idx]
            u, _, wh = np.linalg.svd(overlap)
            v[idx] = v[idx] @ (u @ wh)
    return v


def _adapt_clusters(vectors, hdot, clusters, scale):
    """Rotate each degenerate cluster into the basis diagonalizing the drive.

    Within a degenerate cluster the eigenbasis is arbitrary; the basis
    adapted to the drive is the one the neighboring nondegenerate
    frames continue into (levels that merge into a block at isolated
    times stay identified).  No-op for clusters the drive does not mix.
    """
    v = vectors
    for cluster in clusters:
        if len(cluster) == 1:
            continue
        idx = np.ix_(range(v.shape[0]), cluster)
        sub = v[idx].conj().T @ hdot @ v[idx]
        off = sub - np.diag(np.diag(sub))
        if np.abs(off).max() > BLOCK_COUPLING_TOL * scale:
            _, rot = np.linalg.eigh(sub)
            v = v.copy()
            v[idx] = v[idx] @ rot
    return v


def _couplings_from_hdot(energies, g_matrix, threshold, scale):
    d = len(energies)
    m = np.zeros_like(g_matrix)
    for n in range(d):
        for k in range(d):
            if n == k:
                continue
            delta = energies[n] - energies[k]
            if abs(delta) < threshold:
                if abs(g_matrix[n, k]) > BLOCK_COUPLING_TOL * scale:
                    raise DegenerateBlockCoupling(
                        f"levels {k} and {n} are degenerate but carry drive "
                        f"coupling {abs(g_matrix[n, k]):.3e}"
                    )
                continue
            m[n, k] = -g_matrix[n, k] / delta
    return m


def spectral_frame(
    family: HamiltonianFamily,
    s: float,
    prev: SpectralFrame | None = None,
) -> SpectralFrame:
    """Diagonalize H(s) and assemble the gauge-fixed frame.

    Eigenvalues come out ascending; eigenvector phases are chosen for
    continuity with ``prev`` when given (maximizing Re<phi_prev|phi>),
    canonically otherwise.  Raises DegenerateGroundGap when the ground
    gap is below the degeneracy threshold.
    """
    h = family.eval(s, 0)
    energies, vectors = np.linalg.eigh(h)
    scale = max(1.0, float(np.abs(energies).max()))
    threshold = DEGENERACY_THRESHOLD * scale
    if energies[1] - energies[0] < threshold:
        raise DegenerateGroundGap(
            f"ground gap {energies[1] - energies[0]:.3e} at s={s} below "
            f"threshold {threshold:.3e}"
        )
    clusters = _degenerate_clusters(energies, threshold)
    hdot = family.eval(s, 1)
    vectors = _adapt_clusters(vectors, hdot, clusters, scale)
    if prev is not None:
        vectors = _align_to(vectors, prev.vectors, clusters)
    else:
        vectors = _canonical_gauge(vectors)
    g_matrix = vectors.conj().T @ hdot @ vectors
    couplings = _couplings_from_hdot(energies, g_matrix, threshold, scale)
    return SpectralFrame(
        s=float(s),
        energies=energies,
        vectors=vectors,
        couplings=couplings,
        hdot_elements=g_matrix,
    )


def frame_path(family: HamiltonianFamily, s_grid: np.ndarray) -> list[SpectralFrame]:
    """Frames along s_grid with a continuous gauge.

    The walk is anchored at the grid point whose spectrum is best
    resolved (most distinct clusters) and extended outward with
    phase/cluster alignment, so levels that merge into a degenerate
    block at the endpoints -- as the first excited search level does --
    stay correctly identified there.
    """
    s_grid = np.asarray(s_grid, dtype=float)
    if len(s_grid) < 2:
        raise ValueError("need at least two grid points")

    spectra = []
    for s in s_grid:
        energies = np.linalg.eigvalsh(family.eval(s, 0))
        scale = max(1.0, float(np.abs(energies).max()))
        spectra.append(len(_degenerate_clusters(energies, DEGENERACY_THRESHOLD * scale)))
    candidates = np.flatnonzero(np.asarray(spectra) == max(spectra))
    anchor = int(candidates[len(candidates) // 2])

    frames: list[SpectralFrame | None] = [None] * len(s_grid)
    frames[anchor] = spectral_frame(family, s_grid[anchor])
    for i in range(anchor - 1, -1, -1):
        frames[i] = spectral_frame(family, s_grid[i], prev=frames[i + 1])
    for i in range(anchor + 1, len(s_grid)):
        frames[i] = spectral_frame(family, s_grid[i], prev=frames[i - 1])
    return frames


def _eigenvalue(family: HamiltonianFamily, n: int, s: float) -> float:
    return float(np.linalg.eigvalsh(family.eval(s, 0))[n])


def dynamical_phase(
    family: HamiltonianFamily,
    n: int,
    s: float,
    tol: float = 1e-10,
) -> float:
    """omega_n(s) = integral of E_n(s') over [0, s] (hbar = 1).

    Adaptive quadrature with absolute tolerance ``tol``; raises
    QuadratureFailure if the error estimate exceeds it.
    """
    if s == 0.0:
        return 0.0
    value, err = quad(
        lambda x: _eigenvalue(family, n, x), 0.0, s, epsabs=tol, epsrel=1e-12, limit=200
    )
    if err > max(tol, 1e-10 * abs(value)):
        raise QuadratureFailure(
            f"dynamical phase for level {n}: error estimate {err:.3e} > tol {tol:.3e}"
        )
    return value


# nodes/weights of 7-point Gauss-Legendre on [0, 1]
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(7)
_GL_NODES = 0.5 * (_GL_NODES + 1.0)
_GL_WEIGHTS = 0.5 * _GL_WEIGHTS


def dynamical_phases_on_grid(
    family: HamiltonianFamily, s_grid: np.ndarray
) -> np.ndarray:
    """omega_n(s_i) for all levels, shape (d, len(s_grid)).

    Per-interval Gauss-Legendre quadrature of the eigenvalues followed
    by a cumulative sum; exact to machine precision for the smooth
    spectra in scope.
    """
    s_grid = np.asarray(s_grid, dtype=float)
    d = family.dimension
    omega = np.zeros((d, len(s_grid)))
    for i in range(len(s_grid) - 1):
        a, b = s_grid[i], s_grid[i + 1]
        width = b - a
        seg = np.zeros(d)
        for node, weight in zip(_GL_NODES, _GL_WEIGHTS):
            seg += weight * np.linalg.eigvalsh(family.eval(a + node * width, 0))
        omega[:, i + 1] = omega[:, i] + width * seg
    return omega
