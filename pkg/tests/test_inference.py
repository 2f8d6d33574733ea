import numpy as np
import pytest

from ivbounds import (
    Sample,
    asymptotic_variances,
    bound_estimates,
    cell_stats,
    conditional_quantile,
    direct_effect_bounds,
    imbens_manski_ci,
    trimming_estimators,
)
from ivbounds.errors import (
    BadLevelError,
    EmptyCellError,
    NegativeSeError,
    NonPositiveFirstStageError,
)
from tests.conftest import make_mon_dgp


class TestTrimmingEstimators:
    def test_brute_force_hand_sample(self, hand8):
        est = trimming_estimators(hand8)
        # alpha = 1/3: trim cell {1, 2, 2.5}; mean(1,0) = 5
        assert est.alpha == pytest.approx(1 / 3)
        assert est.delta_1a.lo == pytest.approx(1.0 - 5.0)
        assert est.delta_1a.hi == pytest.approx(2.5 - 5.0)
        # gamma = 1/3: trim cell {6, 7, 8}; mean(0,1) = 3
        assert est.delta_0n.lo == pytest.approx(3.0 - 8.0)
        assert est.delta_0n.hi == pytest.approx(3.0 - 6.0)
        # total: (1 - alpha) tails of {1,2,2.5} minus (1 - gamma) tails of {6,7,8}
        assert est.total_c.lo == pytest.approx(np.mean([1, 2]) - np.mean([7, 8]))
        assert est.total_c.hi == pytest.approx(np.mean([2, 2.5]) - np.mean([6, 7]))

    def test_equals_identified_set_endpoints_on_tie_free_data(self):
        s = make_mon_dgp(3_000, seed=21)
        est = trimming_estimators(s)
        eff = direct_effect_bounds(s)
        assert est.delta_1a.lo == pytest.approx(eff.delta_1a_bounds.lo, abs=1e-12)
        assert est.delta_1a.hi == pytest.approx(eff.delta_1a_bounds.hi, abs=1e-12)
        assert est.delta_0n.lo == pytest.approx(eff.delta_0n_bounds.lo, abs=1e-12)
        assert est.delta_0n.hi == pytest.approx(eff.delta_0n_bounds.hi, abs=1e-12)
        assert est.total_c.lo == pytest.approx(eff.total_c_bounds.lo, abs=1e-12)
        assert est.total_c.hi == pytest.approx(eff.total_c_bounds.hi, abs=1e-12)

    def test_requires_positive_first_stage(self, independent_sample):
        with pytest.raises(NonPositiveFirstStageError):
            trimming_estimators(independent_sample)

    def test_requires_all_cells(self):
        from tests.conftest import make_complier_only

        with pytest.raises((EmptyCellError, NonPositiveFirstStageError)):
            trimming_estimators(make_complier_only())


class TestVariances:
    def test_constant_outcome_gives_zero_se(self):
        y = [2.0] * 40
        rng = np.random.default_rng(1)
        z = [0, 1] * 20
        d = (rng.random(40) < 0.3 + 0.4 * np.asarray(z)).astype(int)
        s = Sample(y, d, z)
        st = cell_stats(s)
        if st.first_stage <= 0 or (st.count == 0).any():
            pytest.skip("degenerate draw")
        var = asymptotic_variances(s)
        for se_lb, se_ub in var.se.values():
            assert se_lb == pytest.approx(0.0, abs=1e-12)
            assert se_ub == pytest.approx(0.0, abs=1e-12)

    def test_components_nonnegative(self, mon_sample):
        var = asymptotic_variances(mon_sample)
        for name in ("v_lb1", "v_ub1", "v_c1", "v_lb2", "v_ub2", "v_c2",
                     "v_lb3", "v_ub3", "v_lb4", "v_ub4"):
            assert getattr(var, name) >= 0.0

    def test_plugin_se_tracks_monte_carlo_sd(self):
        # empirical sd of the never-taker lower bound across replications
        reps, n = 120, 2_000
        lbs, ses = [], []
        for r in range(reps):
            s = make_mon_dgp(n, seed=1000 + r)
            est = trimming_estimators(s)
            var = asymptotic_variances(s)
            lbs.append(est.delta_0n.lo)
            ses.append(var.se["delta_0n"][0])
        ratio = np.std(lbs) / np.mean(ses)
        assert 0.7 < ratio < 1.3


class TestImbensManski:
    def test_two_sided_limit(self):
        _, c = imbens_manski_ci(1.0, 1.0, 1.0, 1.0, 100, 0.95)
        assert c == pytest.approx(1.9600, abs=1e-4)

    def test_one_sided_limit(self):
        _, c = imbens_manski_ci(0.0, 50.0, 1.0, 1.0, 10_000, 0.95)
        assert c == pytest.approx(1.6449, abs=1e-4)

    def test_monotone_in_width(self):
        widths = np.linspace(0.0, 0.5, 12)
        cs = [imbens_manski_ci(0.0, w, 1.0, 1.0, 400, 0.95)[1] for w in widths]
        assert np.all(np.diff(cs) <= 1e-12)
        assert all(1.6449 - 1e-4 <= c <= 1.9600 + 1e-4 for c in cs)

    def test_ci_contains_bound(self):
        rng = np.random.default_rng(3)
        for _ in range(25):
            lb = rng.normal()
            ub = lb + abs(rng.normal())
            se_lb, se_ub = abs(rng.normal()), abs(rng.normal())
            ci, _ = imbens_manski_ci(lb, ub, se_lb, se_ub, 250, 0.9)
            assert ci.lo <= lb and ci.hi >= ub

    def test_zero_se_degenerates(self):
        ci, c = imbens_manski_ci(0.2, 0.4, 0.0, 0.0, 100, 0.95)
        assert (ci.lo, ci.hi) == (0.2, 0.4)
        assert c == pytest.approx(1.6449, abs=1e-4)

    def test_errors(self):
        with pytest.raises(BadLevelError):
            imbens_manski_ci(0.0, 1.0, 1.0, 1.0, 10, 1.5)
        with pytest.raises(NegativeSeError):
            imbens_manski_ci(0.0, 1.0, -1.0, 1.0, 10, 0.95)
        with pytest.raises(ValueError):
            imbens_manski_ci(1.0, 0.0, 1.0, 1.0, 10, 0.95)

    def test_other_levels(self):
        from scipy.special import ndtri

        _, c = imbens_manski_ci(1.0, 1.0, 1.0, 1.0, 100, 0.5)
        assert c == pytest.approx(ndtri(0.75), abs=1e-6)
        # one-sided limit at level 0.5 is the median, i.e. zero
        _, c = imbens_manski_ci(0.0, 9.0, 1.0, 1.0, 10_000, 0.5)
        assert c == pytest.approx(0.0, abs=1e-6)


class TestBoundEstimates:
    def test_ci_width_shrinks_with_replication(self, mon_sample):
        # duplicating the data leaves every point estimate and asymptotic
        # variance unchanged, so the standard errors halve at 4x the size
        s4 = Sample(np.tile(mon_sample.y, 4), np.tile(mon_sample.d, 4),
                    np.tile(mon_sample.z, 4))
        b1 = bound_estimates(mon_sample)["delta_0n"]
        b4 = bound_estimates(s4)["delta_0n"]
        assert b4.lb == pytest.approx(b1.lb, abs=1e-12)
        assert b4.ub == pytest.approx(b1.ub, abs=1e-12)
        assert b4.se_lb == pytest.approx(b1.se_lb / 2, rel=1e-9)
        assert b4.ci.width < b1.ci.width

    def test_cis_contain_estimates(self, mon_sample):
        out = bound_estimates(mon_sample)
        for key, b in out.items():
            assert b.ci.lo <= b.lb <= b.ub <= b.ci.hi
            assert 1.6449 - 1e-4 <= b.c_bar <= 1.9600 + 1e-4
            # finished standard errors: the CI margin is c_bar * se
            assert b.lb - b.ci.lo == pytest.approx(b.c_bar * b.se_lb, rel=1e-9)
