import numpy as np
import pytest

from adia_tradeoff import (
    GridTooCoarse,
    GroverClosedForms,
    beta_schedule,
    b2,
    grover_family,
    j_integral,
    linear_schedule,
    recurrence_table,
)


@pytest.fixture(scope="module")
def table8(grover8_linear):
    return recurrence_table(grover8_linear, 2)


class TestFirstOrderEntries:
    def test_off_diagonal_is_lambda(self, grover8_linear, table8):
        # b_n0^(1)(s) = lambda_n0(s) and every other column vanishes
        forms = GroverClosedForms(8, linear_schedule())
        lam = forms.lambda_10(table8.s_grid)
        assert np.allclose(table8.entries[1, 1, 0, :], lam, rtol=1e-10)
        assert np.abs(table8.entries[1, 0, 1, :]).max() <= 1e-12

    def test_diagonal_excited_constant(self, table8):
        forms = GroverClosedForms(8, linear_schedule())
        expected = -forms.lambda_10(0.0)
        assert np.allclose(table8.entries[1, 1, 1, :], expected, atol=1e-12)

    def test_ground_diagonal_accumulates_j0(self, grover8_linear, table8):
        # b_00^(1)(s) = J_0(s), real and nonnegative
        for i in (400, 800, 1600):
            s = table8.s_grid[i]
            entry = table8.entries[1, 0, 0, i]
            assert entry.imag == pytest.approx(0.0, abs=1e-14)
            assert entry.real == pytest.approx(
                j_integral(grover8_linear, 0, float(s)), abs=1e-8
            )
            assert entry.real >= 0.0

    def test_zeroth_order_is_adiabatic(self, table8):
        assert np.allclose(table8.entries[0, 0, 0, :], 1.0)
        assert np.abs(table8.entries[0, 1, :, :]).max() == 0.0

    def test_initial_conditions(self, table8):
        # aggregated coefficients of every order >= 1 vanish at s = 0
        for p in (1, 2):
            assert np.abs(table8.aggregate(p, 77.0, index=0)).max() <= 1e-12


class TestAggregatesMatchClosedForms:
    @pytest.mark.parametrize("mode", ["reduced2", "fullN"])
    def test_two_level_aggregates(self, mode):
        family = grover_family(8, linear_schedule(), mode=mode)
        forms = GroverClosedForms(8, linear_schedule())
        table = recurrence_table(family, 2)
        for T in (41.0, 137.0):
            phase = np.exp(1j * T * forms.omega_end)
            b1_closed = phase * forms.lambda_10(1.0) - forms.lambda_10(0.0)
            b2_closed = phase * (
                forms.j0_end * forms.lambda_10(1.0) + forms.lambda_dot_10(1.0)
            ) - (-forms.j0_end * forms.lambda_10(0.0) + forms.lambda_dot_10(0.0))
            assert abs(table.aggregate(1, T)[1] - b1_closed) / abs(b1_closed) <= 1e-6
            assert abs(table.aggregate(2, T)[1] - b2_closed) / abs(b2_closed) <= 1e-6

    def test_matches_phase_explicit_b2(self, grover8_linear, table8):
        coeffs = b2(grover8_linear, 1.0)
        T = 93.0
        assert complex(table8.aggregate(2, T)[1]) == pytest.approx(
            complex(coeffs.at(T)[0]), rel=1e-6
        )

    def test_inert_levels_stay_empty(self, grover8_linear_full):
        # analytically zero; the residue is endpoint-alignment noise
        # amplified by the stencil, far below any coefficient scale
        table = recurrence_table(grover8_linear_full, 2)
        assert np.abs(table.entries[1:, 2:, :, :]).max() <= 1e-5
        assert np.abs(table.aggregate(1, 77.0)[2:]).max() <= 1e-6
        assert np.abs(table.aggregate(2, 77.0)[2:]).max() <= 1e-5


class TestBoundaryCancelationVanishing:
    def test_beta_first_order_vanishes_at_end(self):
        family = grover_family(8, beta_schedule(1))
        table = recurrence_table(family, 2)
        residual = np.abs(table.aggregate(1, 55.0)[1:]).max()
        assert residual <= 10.0 * max(table.grid_error, 1e-15)

    def test_beta_excited_diagonal_identically_zero(self):
        # with a vanishing initial drive derivative the excited diagonal
        # entries stay zero along the whole evolution
        family = grover_family(8, beta_schedule(1))
        table = recurrence_table(family, 1)
        assert np.abs(table.entries[1, 1, 1, :]).max() <= 10.0 * max(table.grid_error, 1e-15)

    def test_second_order_cancelation_kills_two_orders(self):
        # first two aggregated orders vanish at s = 1 when the first two
        # drive derivatives vanish at both ends
        family = grover_family(8, beta_schedule(2))
        table = recurrence_table(family, 2)
        bound = 10.0 * max(table.grid_error, 1e-15)
        for q in (1, 2):
            assert np.abs(table.aggregate(q, 55.0)[1:]).max() <= bound


class TestGridGate:
    def test_too_coarse_rejected(self):
        family = grover_family(8, beta_schedule(2))
        with pytest.raises(GridTooCoarse):
            recurrence_table(family, 2, s_grid=np.linspace(0.0, 1.0, 41))

    def test_non_uniform_rejected(self, grover8_linear):
        grid = np.linspace(0.0, 1.0, 101) ** 2
        with pytest.raises(ValueError, match="uniform"):
            recurrence_table(grover8_linear, 1, s_grid=grid)

    def test_even_point_count_rejected(self, grover8_linear):
        with pytest.raises(ValueError, match="odd"):
            recurrence_table(grover8_linear, 1, s_grid=np.linspace(0.0, 1.0, 100))

    def test_order_cap(self, grover8_linear):
        with pytest.raises(ValueError, match="order"):
            recurrence_table(grover8_linear, 5)
