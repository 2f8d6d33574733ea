import warnings

import numpy as np
import pytest

from ivbounds import (
    Sample,
    cell_stats,
    direct_effect_bounds,
    identified_set_a3,
    itt_decomposition,
    mean_of_cdf,
    potential_cdf_bounds,
    potential_mean_bounds,
    subdistribution,
)
from ivbounds.errors import (
    EmptyCellError,
    MuOutOfBoundsWarning,
    NonPositiveFirstStageError,
)
from ivbounds.sets import relabel_entries
from tests.conftest import make_independent, make_mon_dgp


class TestPotentialCdfBounds:
    def test_matches_brute_force(self, hand8):
        cb = potential_cdf_bounds(hand8)
        st = cell_stats(hand8)
        p_a, p_c, p_n = 0.25, 0.5, 0.25
        grid = np.unique(hand8.y)
        sub11 = np.array([subdistribution(hand8, g, 1, 1) for g in grid])
        sub00 = np.array([subdistribution(hand8, g, 0, 0) for g in grid])
        assert np.allclose(cb.f_11a_lb.on_grid(grid),
                           np.maximum(sub11 - p_c, 0) / p_a, atol=1e-12)
        assert np.allclose(cb.f_11a_ub.on_grid(grid),
                           np.minimum(sub11 / p_a, 1), atol=1e-12)
        assert np.allclose(cb.f_00n_lb.on_grid(grid),
                           np.maximum(sub00 - p_c, 0) / p_n, atol=1e-12)
        assert np.allclose(cb.f_00n_ub.on_grid(grid),
                           np.minimum(sub00 / p_n, 1), atol=1e-12)
        # pure cells are plain ecdfs
        assert cb.f_10a(5.0) == 1.0 and cb.f_10a(4.9) == 0.0
        assert cb.f_01n(3.0) == 1.0

    def test_small_complier_share_pins_cdf(self):
        # one complier among many always-takers: bounds nearly coincide
        y = [1.0, 2.0, 3.0, 4.0, 5.0] * 4 + [0.5] + [9.0, 9.5] * 2
        d = [1] * 20 + [1] + [0] * 4
        z = ([1, 0] * 10) + [1] + [1, 0, 1, 0]
        s = Sample(y, d, z)
        st = cell_stats(s)
        if st.first_stage <= 0:
            pytest.skip("construction needs a positive first stage")
        cb = potential_cdf_bounds(s)
        gap = np.max(cb.f_11a_ub.on_grid(cb.f_11a_ub.grid)
                     - cb.f_11a_lb.on_grid(cb.f_11a_ub.grid))
        assert gap <= st.prob[1, 1] and gap < 0.6

    def test_complier_transform_mixture_identity(self, hand8):
        cb = potential_cdf_bounds(hand8)
        grid = np.unique(hand8.y)
        sub11 = np.array([subdistribution(hand8, g, 1, 1) for g in grid])
        for anchor in (cb.f_11a_lb, cb.f_11a_ub):
            f11c = cb.complier_cdf(1, anchor)
            mix = 0.25 * anchor.on_grid(grid) + 0.5 * f11c.on_grid(grid)
            assert np.allclose(mix, sub11, atol=1e-12)

    def test_requires_positive_first_stage(self, independent_sample):
        with pytest.raises(NonPositiveFirstStageError):
            potential_cdf_bounds(independent_sample)

    def test_empty_pure_cell(self):
        from tests.conftest import make_complier_only

        with pytest.raises(EmptyCellError):
            potential_cdf_bounds(make_complier_only())


class TestPotentialMeanBounds:
    def test_closed_forms_equal_envelope_integration(self, hand8):
        mb = potential_mean_bounds(hand8)
        cb = potential_cdf_bounds(hand8)
        # no ties: the trimmed means equal the envelope-cdf means exactly
        assert mb.mu_11a.lo == pytest.approx(mean_of_cdf(cb.f_11a_ub), abs=1e-12)
        assert mb.mu_11a.hi == pytest.approx(mean_of_cdf(cb.f_11a_lb), abs=1e-12)
        assert mb.mu_00n.lo == pytest.approx(mean_of_cdf(cb.f_00n_ub), abs=1e-12)
        assert mb.mu_00n.hi == pytest.approx(mean_of_cdf(cb.f_00n_lb), abs=1e-12)

    def test_hand_values(self, hand8):
        mb = potential_mean_bounds(hand8)
        # alpha = 1/3 of cell {1, 2, 2.5}: lower tail {1}, upper tail {2.5}
        assert mb.alpha == pytest.approx(1 / 3)
        assert mb.mu_11a.lo == 1.0
        assert mb.mu_11a.hi == 2.5
        # gamma = 1/3 of cell {6, 7, 8}
        assert mb.mu_00n.lo == 6.0
        assert mb.mu_00n.hi == 8.0
        # complier means flip endpoints: mu_11c from remaining 2/3 of the cell
        assert mb.mu_11c.lo == pytest.approx((1 + 2) / 2)
        assert mb.mu_11c.hi == pytest.approx((2 + 2.5) / 2)


class TestDirectEffects:
    def test_hand_corner_enumeration(self, hand8):
        eff = direct_effect_bounds(hand8)
        mb = potential_mean_bounds(hand8)
        # brute-force corners
        d1a = [a - mb.mu_10a for a in (mb.mu_11a.lo, mb.mu_11a.hi)]
        d0n = [mb.mu_01n - b for b in (mb.mu_00n.lo, mb.mu_00n.hi)]
        totals = [
            c11 - c00
            for c11 in (mb.mu_11c.lo, mb.mu_11c.hi)
            for c00 in (mb.mu_00c.lo, mb.mu_00c.hi)
        ]
        assert eff.delta_1a_bounds.lo == pytest.approx(min(d1a), abs=1e-12)
        assert eff.delta_1a_bounds.hi == pytest.approx(max(d1a), abs=1e-12)
        assert eff.delta_0n_bounds.lo == pytest.approx(min(d0n), abs=1e-12)
        assert eff.delta_0n_bounds.hi == pytest.approx(max(d0n), abs=1e-12)
        assert eff.total_c_bounds.lo == pytest.approx(min(totals), abs=1e-12)
        assert eff.total_c_bounds.hi == pytest.approx(max(totals), abs=1e-12)

    def test_widths_are_shift_maps(self, mon_sample):
        eff = direct_effect_bounds(mon_sample)
        assert eff.delta_1a_bounds.width == pytest.approx(
            eff.mu_11a_bounds.width, abs=1e-12
        )
        assert eff.delta_0n_bounds.width == pytest.approx(
            eff.mu_00n_bounds.width, abs=1e-12
        )

    def test_exclusion_true_design_contains_zero(self):
        s = make_mon_dgp(30_000, seed=77)
        eff = direct_effect_bounds(s)
        assert eff.delta_1a_bounds.contains(0.0)
        assert eff.delta_0n_bounds.contains(0.0)


class TestIttDecomposition:
    def test_identity_at_corners_and_midpoint(self, mon_sample):
        mb = potential_mean_bounds(mon_sample)
        for m1 in (mb.mu_11a.lo, mb.mu_11a.hi, mb.mu_11a.midpoint):
            for m0 in (mb.mu_00n.lo, mb.mu_00n.hi, mb.mu_00n.midpoint):
                iden = itt_decomposition(mon_sample, m1, m0)
                assert abs(iden.lhs - iden.rhs) < 1e-10

    def test_identity_even_out_of_bounds(self, mon_sample):
        with pytest.warns(MuOutOfBoundsWarning):
            iden = itt_decomposition(mon_sample, 1e3, -1e3)
        assert abs(iden.lhs - iden.rhs) < 1e-9

    def test_random_small_samples(self):
        rng = np.random.default_rng(55)
        done = 0
        while done < 50:
            n = int(rng.integers(12, 40))
            z = rng.integers(0, 2, n)
            d = (rng.random(n) < 0.3 + 0.5 * z).astype(int)
            y = rng.normal(size=n)
            s = Sample(y, d, z)
            st = cell_stats(s)
            if st.first_stage <= 0 or (st.count == 0).any():
                continue
            mb = potential_mean_bounds(s)
            iden = itt_decomposition(s, mb.mu_11a.midpoint, mb.mu_00n.midpoint)
            assert abs(iden.lhs - iden.rhs) < 1e-10
            done += 1


class TestIdentifiedSetA3:
    def test_never_empty_across_designs(self):
        rng = np.random.default_rng(66)
        for k in range(30):
            n = int(rng.integers(8, 60))
            s = Sample(rng.normal(size=n), rng.integers(0, 2, n), rng.integers(0, 2, n))
            if s.arm_size(0) == 0 or s.arm_size(1) == 0:
                continue
            res = identified_set_a3(s)
            assert not res.is_empty

    def test_positive_first_stage_entries(self, hand8):
        res = identified_set_a3(hand8)
        mb = potential_mean_bounds(hand8)
        assert res.case_tag == "A3.1"
        assert res["p_a"].lo == 0.25
        assert res["p_df"].lo == 0.0
        assert res["delta_1a"].lo == pytest.approx(mb.mu_11a.lo - mb.mu_10a)
        assert res["delta_1a"].hi == pytest.approx(mb.mu_11a.hi - mb.mu_10a)
        assert res["delta_0n"].lo == pytest.approx(mb.mu_01n - mb.mu_00n.hi)
        # unconstrained combinations stay at the outcome-range bracket
        assert res["theta_0df"].kind == "full_range"
        assert res["delta_0a"].kind == "full_range"
        # partially informed entries are genuine intervals
        assert res["theta_1a"].kind == "interval"

    def test_zero_first_stage_points(self, independent_sample):
        res = identified_set_a3(independent_sample)
        st = cell_stats(independent_sample)
        assert res.case_tag == "A3.3"
        assert res["p_c"].lo == 0.0 and res["p_df"].lo == 0.0
        assert res["delta_1a"].kind == "point"
        assert res["delta_1a"].lo == pytest.approx(
            st.cond_mean[1, 1] - st.cond_mean[1, 0]
        )
        assert res["theta_0c"].kind == "full_range"

    def test_negative_first_stage_round_trip(self, hand8):
        flipped_sample = hand8.relabel_instrument()
        res = identified_set_a3(flipped_sample)
        assert res.case_tag == "A3.2"
        direct = identified_set_a3(hand8)
        # relabeling the relabeled set must recover the direct one
        mapped = relabel_entries(res.entries)
        for key, entry in direct.entries.items():
            got = mapped[key]
            assert got.kind == entry.kind
            if not entry.is_empty:
                assert got.lo == pytest.approx(entry.lo, abs=1e-12)
                assert got.hi == pytest.approx(entry.hi, abs=1e-12)

    def test_flipped_sample_maps_types(self, hand8):
        # on the flipped data the original always-takers' entries appear
        # unchanged and compliers/defiers swap
        direct = identified_set_a3(hand8)
        res = identified_set_a3(hand8.relabel_instrument())
        assert res["p_df"].lo == pytest.approx(direct["p_c"].lo)
        assert res["p_c"].lo == pytest.approx(direct["p_df"].lo)
        assert res["p_a"].lo == pytest.approx(direct["p_a"].lo)
        # direct effects flip sign under the arm swap
        assert res["delta_1a"].lo == pytest.approx(-direct["delta_1a"].hi)
        assert res["delta_1a"].hi == pytest.approx(-direct["delta_1a"].lo)

    def test_exclusion_true_deltas_contain_zero(self):
        s = make_mon_dgp(30_000, seed=99)
        res = identified_set_a3(s)
        assert res["delta_1a"].contains(0.0)
        assert res["delta_0n"].contains(0.0)
