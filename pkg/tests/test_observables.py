"""Tests for the b measurements, extrapolation, and boundary entropies."""

from __future__ import annotations

import numpy as np
import pytest

from loopcells import fixtures as fx
from loopcells import observables as obs
from loopcells import spectral


class TestTrousers:
    def test_spin_width_four_matches_published_components(self):
        t = obs.trousers_xxz(4)
        np.testing.assert_allclose(t.vector, fx.SPIN_L4_TROUSERS, atol=1e-12)
        assert t.model == "xxz" and t.L == 4

    def test_dilute_all_empty_component_is_one(self):
        t = obs.trousers_dilute(4)
        from loopcells.diagrams import enumerate_dilute

        basis = enumerate_dilute(4)
        empty = next(k for k, s in enumerate(basis) if not any(s.occupied_mask))
        assert t.vector[empty] == pytest.approx(1.0)

    def test_dilute_vector_lives_in_zero_string_sector(self):
        t = obs.trousers_dilute(6)
        from loopcells.diagrams import enumerate_dilute

        for coeff, state in zip(t.vector, enumerate_dilute(6)):
            if any(role == 1 for role in state.roles):
                assert coeff == 0.0

    def test_dilute_width_must_be_even(self):
        with pytest.raises(ValueError, match="even"):
            obs.trousers_dilute(3)

    def test_open_chain_trousers_exist(self):
        t = obs.trousers_open(4, 2.0)
        assert t.vector.shape == (6,)
        assert np.linalg.norm(t.vector) > 0


class TestSpinChainB:
    def test_width_four_equals_closed_form(self):
        m = obs.b_xxz(4)
        assert m.value == pytest.approx(fx.B_XXZ_L4_EXACT, abs=1e-9)
        assert m.imag_defect < 1e-10
        assert m.gauge_sensitivity < 1e-10

    def test_invariant_under_cell_rescaling(self):
        base = obs.b_xxz(4).value
        for scale in (0.7 + 0.3j, 13.0, -2.0):
            assert obs.b_xxz(4, cell_scale=scale).value == pytest.approx(base, abs=1e-10)

    def test_width_must_be_multiple_of_four(self):
        with pytest.raises(ValueError, match="multiple of 4"):
            obs.b_xxz(6)

    def test_width_eight_matches_table(self):
        m = obs.b_xxz(8)
        assert m.value == pytest.approx(fx.B_XXZ_TABLE[8], abs=1e-4)
        assert 0 < m.delta < 2.5

    def test_sparse_path_agrees_with_dense(self, monkeypatch):
        # the defective pair splits by ~sqrt(eps), so the two cluster means
        # (ARPACK vs LAPACK) can differ at the 1e-9 level; b inherits that
        dense = obs.b_xxz(8).value
        monkeypatch.setattr(spectral, "DENSE_LIMIT", 10)
        sparse = obs.b_xxz(8).value
        assert sparse == pytest.approx(dense, abs=1e-7)


class TestPolymerB:
    def test_width_two_equals_closed_form(self):
        m = obs.b_polymer(2)
        assert m.value == pytest.approx(fx.b_polymer_l2_exact(), abs=1e-12)

    def test_invariant_under_cell_rescaling(self):
        base = obs.b_polymer(4).value
        assert obs.b_polymer(4, right_scale=3.7).value == pytest.approx(base, abs=1e-10)
        assert obs.b_polymer(4, left_scale=-0.4).value == pytest.approx(base, abs=1e-10)
        assert obs.b_polymer(4, right_scale=2.0, left_scale=5.0).value == pytest.approx(
            base, abs=1e-10
        )

    def test_width_four_matches_table(self):
        assert obs.b_polymer(4).value == pytest.approx(fx.B_POLYMER_TABLE[4], abs=1e-4)

    def test_width_must_be_even(self):
        with pytest.raises(ValueError, match="even"):
            obs.b_polymer(3)


class TestDeformedB:
    @pytest.mark.parametrize("y", [2.0, -1.0, 0.5])
    def test_agrees_with_spin_chain(self, y):
        assert obs.b_deformed(4, y).value == pytest.approx(obs.b_xxz(4).value, abs=1e-8)

    def test_invariant_under_cell_rescaling(self):
        base = obs.b_deformed(4, 2.0).value
        assert obs.b_deformed(4, 2.0, cell_scale=0.3 - 1.1j).value == pytest.approx(
            base, abs=1e-10
        )

    def test_undeformed_point_has_no_cell(self):
        with pytest.raises(spectral.DiagonalizableLevelError):
            obs.b_deformed(4, 1.0)

    def test_width_must_be_even(self):
        with pytest.raises(ValueError, match="even"):
            obs.b_deformed(5, 2.0)


class TestPercolationStructure:
    def test_width_four_report(self):
        report = obs.percolation_check(4)
        assert report.cluster_size == 2
        assert report.geometric_multiplicity == 2
        assert report.nilpotent_norm < 1e-8
        assert report.diagonalizable
        assert report.deformed_genuine == {2.0: True, -1.0: True, 0.5: True}


class TestExtrapolation:
    def test_exact_quadratic_recovery(self):
        sizes = [6, 8, 10, 12]
        values = [0.43 - 1.7 / L + 0.9 / L**2 for L in sizes]
        fit = obs.extrapolate_b(sizes, values)
        assert fit.value == pytest.approx(0.43, abs=1e-10)
        assert "b + a1/L" in fit.candidates
        assert "b + a1/L + a2/L^2" in fit.candidates

    def test_power_law_candidate_when_it_fits(self):
        sizes = [4, 6, 8, 10, 12]
        values = [-0.6 + 2.0 / L**1.3 for L in sizes]
        fit = obs.extrapolate_b(sizes, values)
        assert fit.candidates["b + a1/L^p"] == pytest.approx(-0.6, abs=1e-6)
        assert fit.uncertainty is not None and fit.uncertainty > 0

    def test_needs_three_sizes(self):
        with pytest.raises(ValueError, match="three sizes"):
            obs.extrapolate_b([4, 8], [1.0, 2.0])

    def test_published_tables_land_in_windows(self):
        xxz = obs.extrapolate_b(list(fx.B_XXZ_TABLE), list(fx.B_XXZ_TABLE.values()))
        lo, hi = fx.B_XXZ_LIMIT[0] - fx.B_XXZ_LIMIT[1], fx.B_XXZ_LIMIT[0] + fx.B_XXZ_LIMIT[1]
        assert lo <= xxz.value <= hi
        poly = obs.extrapolate_b(
            list(fx.B_POLYMER_TABLE), list(fx.B_POLYMER_TABLE.values())
        )
        lo, hi = (
            fx.B_POLYMER_LIMIT[0] - fx.B_POLYMER_LIMIT[1],
            fx.B_POLYMER_LIMIT[0] + fx.B_POLYMER_LIMIT[1],
        )
        assert lo <= poly.value <= hi


class TestInversePowerFit:
    def test_exact_recovery_with_extensive_term(self):
        # representable by both the full and the drop-smallest ansatz, so the
        # constant term is exact and the spread estimate collapses
        sizes = [8, 10, 12, 14]
        values = [0.7 * L + 0.3 + 0.11 / L for L in sizes]
        fit = obs._inverse_power_fit(sizes, values)
        assert fit.value == pytest.approx(0.3, abs=1e-8)
        assert fit.uncertainty is not None and fit.uncertainty < 1e-7
        assert "drop-smallest" in fit.candidates

    def test_spread_reports_unmodeled_corrections(self):
        sizes = [8, 10, 12, 14]
        values = [0.7 * L + 0.3 + 0.11 / L + 0.05 / L**2 for L in sizes]
        fit = obs._inverse_power_fit(sizes, values)
        assert fit.value == pytest.approx(0.3, abs=1e-8)
        assert fit.uncertainty is not None and 1e-5 < fit.uncertainty < 1e-2

    def test_three_sizes_have_no_spread_estimate(self):
        sizes = [8, 10, 12]
        values = [0.7 * L + 0.3 + 0.11 / L for L in sizes]
        fit = obs._inverse_power_fit(sizes, values)
        assert fit.value == pytest.approx(0.3, abs=1e-9)
        assert fit.uncertainty is None


class TestIsingEntropy:
    def test_fixed_boundary_universal_term(self):
        fit = obs.ising_boundary_entropy(sizes=(8, 10, 12, 14), bc="fixed")
        assert fit.value == pytest.approx(fx.ISING_FIXED_ENTROPY, abs=5e-3)

    def test_free_boundary_term_vanishes(self):
        fit = obs.ising_boundary_entropy(sizes=(8, 10, 12, 14), bc="free")
        assert abs(fit.value) < 1e-3

    def test_unknown_boundary_condition(self):
        with pytest.raises(ValueError, match="unknown boundary condition"):
            obs.ising_boundary_entropy(bc="twisted")


class TestLoopEntropy:
    def test_closed_form_vanishes_at_the_symmetric_point(self):
        assert abs(obs.loop_entropy_exact(1.0, 1.0)) < 1e-12

    def test_lattice_tracks_closed_form(self):
        report = obs.loop_boundary_entropy(1.0, 1.5, sizes=(10, 12, 14, 16))
        assert report.difference < 5e-2
        assert report.exact == pytest.approx(obs.loop_entropy_exact(1.0, 1.5))

    def test_loop_weight_must_be_subcritical(self):
        with pytest.raises(ValueError, match="loop weight"):
            obs.loop_entropy_exact(2.5, 1.0)
        with pytest.raises(ValueError, match="loop weight"):
            obs.loop_boundary_entropy(2.5, 1.0)

    def test_boundary_weight_must_be_positive(self):
        with pytest.raises(ValueError, match="boundary loop weight"):
            obs.loop_boundary_entropy(1.0, -0.2)

    def test_row_parity_is_checked(self):
        with pytest.raises(ValueError, match="even sizes"):
            obs.loop_boundary_entropy(1.0, 1.0, sizes=(7, 9))
