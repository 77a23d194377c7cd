import math

import numpy as np
import pytest
from scipy.integrate import simpson

from adia_tradeoff import (
    DegenerateGroundGap,
    GroverClosedForms,
    dynamical_phase,
    dynamical_phases_on_grid,
    frame_path,
    grover_family,
    interpolating_family,
    linear_schedule,
    spectral_frame,
)


class TestFrameInvariants:
    @pytest.mark.parametrize("s", [0.0, 0.3, 0.5, 0.77, 1.0])
    def test_orthonormal_and_gauge(self, grover8_linear_full, s):
        frame = spectral_frame(grover8_linear_full, s)
        d = frame.dimension
        gram = frame.vectors.conj().T @ frame.vectors
        assert np.abs(gram - np.eye(d)).max() <= 1e-10
        assert np.abs(np.diag(frame.couplings)).max() == 0.0
        # couplings anti-Hermitian
        assert np.abs(frame.couplings + frame.couplings.conj().T).max() <= 1e-10

    @pytest.mark.parametrize("s", [0.1, 0.5, 0.9])
    def test_reconstructs_hamiltonian(self, grover8_linear_full, s):
        frame = spectral_frame(grover8_linear_full, s)
        h = frame.vectors @ np.diag(frame.energies) @ frame.vectors.conj().T
        ref = grover8_linear_full.eval(s, 0)
        assert np.abs(h - ref).max() <= 1e-10 * max(1.0, np.abs(ref).max())

    def test_eigenvalues_ascending(self, grover8_linear_full):
        frame = spectral_frame(grover8_linear_full, 0.4)
        assert np.all(np.diff(frame.energies) >= -1e-14)

    def test_hellmann_feynman(self, grover8_linear):
        # dE_n/ds equals the diagonal drive matrix element
        h = 1e-6
        for s in (0.25, 0.6):
            frame = spectral_frame(grover8_linear, s)
            e_plus = np.linalg.eigvalsh(grover8_linear.eval(s + h, 0))
            e_minus = np.linalg.eigvalsh(grover8_linear.eval(s - h, 0))
            fd = (e_plus - e_minus) / (2 * h)
            assert np.allclose(np.diag(frame.hdot_elements).real, fd, atol=1e-8)

    def test_gauge_continuity_second_order(self, grover8_linear):
        # aligned frames: |<phi(s)|phi(s+h)> - 1| shrinks 4x when h halves
        s = 0.4

        def deviation(h):
            base = spectral_frame(grover8_linear, s)
            step = spectral_frame(grover8_linear, s + h, prev=base)
            return abs(np.vdot(base.vectors[:, 0], step.vectors[:, 0]) - 1.0)

        d1, d2 = deviation(2e-3), deviation(1e-3)
        assert d1 / d2 == pytest.approx(4.0, rel=0.15)


class TestGroverFrames:
    def test_midpoint_gap(self):
        family = grover_family(4, linear_schedule())
        frame = spectral_frame(family, 0.5)
        assert frame.ground_gap == pytest.approx(0.5, abs=1e-12)

    def test_coupling_matches_closed_form_and_finite_difference(self):
        # M_10 = (sqrt(N-1)/N) fdot / Delta^2, checked against a
        # parallel-transport finite-difference of the ground state
        n, s, h = 8, 0.3, 1e-5
        family = grover_family(n, linear_schedule())
        forms = GroverClosedForms(n, linear_schedule())
        frame = spectral_frame(family, s)
        closed = math.sqrt(n - 1) / n * 1.0 / forms.delta(s) ** 2
        assert frame.couplings[1, 0] == pytest.approx(closed, rel=1e-10)

        plus = spectral_frame(family, s + h, prev=frame)
        minus = spectral_frame(family, s - h, prev=frame)
        fd = np.vdot(frame.vectors[:, 1], (plus.vectors[:, 0] - minus.vectors[:, 0]) / (2 * h))
        assert frame.couplings[1, 0] == pytest.approx(fd, rel=1e-6)

    def test_degenerate_block_uncoupled(self, grover8_linear_full):
        frame = spectral_frame(grover8_linear_full, 0.5)
        # levels 2..N-1 sit at the constant eigenvalue 1 and stay inert
        assert np.allclose(frame.energies[2:], 1.0, atol=1e-12)
        assert np.abs(frame.couplings[2:, :]).max() <= 1e-12

    def test_endpoint_merge_resolved_by_path(self, grover8_linear_full):
        # at s=1 the first excited level joins the constant block; the
        # continuity walk keeps it identified
        frames = frame_path(grover8_linear_full, np.linspace(0.0, 1.0, 65))
        forms = GroverClosedForms(8, linear_schedule())
        assert frames[-1].lam(1, 0) == pytest.approx(forms.lambda_10(1.0), rel=1e-10)
        assert frames[0].lam(1, 0) == pytest.approx(forms.lambda_10(0.0), rel=1e-10)

    def test_degenerate_ground_gap_raises(self):
        flat = np.zeros((2, 2))
        family = interpolating_family(flat, flat, linear_schedule())
        with pytest.raises(DegenerateGroundGap):
            spectral_frame(family, 0.5)


class TestDynamicalPhase:
    def test_constant_level(self):
        # constant E_n integrates to E_n * s
        h_i = np.diag([0.0, 1.0])
        family = interpolating_family(h_i, h_i, linear_schedule())
        assert dynamical_phase(family, 1, 1.0) == pytest.approx(1.0, abs=1e-12)
        assert dynamical_phase(family, 1, 0.0) == 0.0

    def test_gap_phase_against_fixed_grid_oracle(self):
        n = 2
        family = grover_family(n, linear_schedule())
        omega = dynamical_phase(family, 1, 1.0) - dynamical_phase(family, 0, 1.0)
        s = np.linspace(0.0, 1.0, 10001)
        gap = np.sqrt(1.0 - 4.0 * (n - 1) / n * s * (1.0 - s))
        oracle = simpson(gap, x=s)
        assert omega == pytest.approx(oracle, abs=1e-10)

    def test_grid_phases_match_adaptive(self, grover8_linear):
        grid = np.linspace(0.0, 1.0, 33)
        table = dynamical_phases_on_grid(grover8_linear, grid)
        for level in (0, 1):
            assert table[level, -1] == pytest.approx(
                dynamical_phase(grover8_linear, level, 1.0), abs=1e-11
            )
