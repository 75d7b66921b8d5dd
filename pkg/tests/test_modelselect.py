import numpy as np
import pytest
from numpy.testing import assert_array_equal

from plspress import SimConfig, center, select_gamma, select_R, sensitivity_experiment, simulate
from plspress.errors import DimensionError
from plspress.modelselect import argmin_index, support_f1
from plspress.sparse import gamma_max


class TestArgmin:
    def test_earliest_tie_wins(self):
        assert argmin_index([3.0, 1.0, 1.0, 2.0]) == 1

    def test_rounding_level_tie(self):
        assert argmin_index([5.0, 1e-28, 3e-30, np.inf]) == 1

    def test_infinite_scores_ignored(self):
        assert argmin_index([np.inf, 2.0, 1.0]) == 2
        assert argmin_index([np.inf, np.inf]) == 0


def test_f1():
    assert support_f1([1, 2, 3], [1, 2, 3]) == 1.0
    assert support_f1([], [1]) == 0.0
    assert support_f1([1, 2], [2, 3]) == pytest.approx(0.5)


class TestSelectR:
    @pytest.mark.parametrize("method", ["press", "loocv_full"])
    def test_noise_free_picks_true_rank(self, method):
        sim = simulate(SimConfig(n=40, p=10, q=8, R_true=3, noise_sd=0.0, factor_corr=1.0, seed=3))
        res = select_R(sim.data, 6, method)
        assert res.chosen == 3
        assert res.scores[2] <= 1e-8
        assert_array_equal(res.grid, np.arange(1, 7))

    @pytest.mark.parametrize("method", ["press", "loocv_full"])
    def test_singleton_grid(self, random_block, method):
        res = select_R(random_block, 1, method)
        assert res.chosen == 1 and len(res.scores) == 1

    def test_scores_finite_and_close(self, random_block):
        a = select_R(random_block, 5, "press")
        b = select_R(random_block, 5, "loocv_full")
        assert np.all(np.isfinite(a.scores)) and np.all(np.isfinite(b.scores))
        assert np.all(a.scores <= b.scores)
        assert np.max(np.abs(a.scores - b.scores) / b.scores) < 0.2

    def test_rejects_bad_R_max(self, random_block):
        with pytest.raises(DimensionError):
            select_R(random_block, 21)
        with pytest.raises(ValueError):
            select_R(random_block, 3, "kfold")

    def test_press_time_at_most_linear_in_n(self):
        import time

        ns = np.array([200, 400, 800, 1600])
        times = []
        for n in ns:
            sim = simulate(SimConfig(n=int(n), p=20, q=20, R_true=3, seed=1))
            select_R(sim.data, 10, "press")
            reps = []
            for _ in range(5):
                t0 = time.perf_counter()
                select_R(sim.data, 10, "press")
                reps.append(time.perf_counter() - t0)
            times.append(np.median(reps))
        slope = np.polyfit(np.log(ns), np.log(times), 1)[0]
        assert slope <= 1.2, (slope, times)


class TestSelectGamma:
    def test_two_point_grid(self, random_block):
        res = select_gamma(random_block, 2, "press")
        M = random_block.X.T @ random_block.Y
        assert res.grid[0] == 0.0 and res.grid[1] == gamma_max(M)
        assert np.isinf(res.scores[1]) and np.isfinite(res.scores[0])
        assert res.chosen == 0.0
        assert len(res.support) == random_block.p

    def test_two_point_grid_loocv(self, random_block):
        res = select_gamma(random_block, 2, "loocv_full")
        assert np.isinf(res.scores[1]) and res.chosen == 0.0

    @pytest.mark.parametrize("method", ["press", "loocv_full"])
    def test_pure_noise_prefers_heavy_shrinkage(self, method):
        positions = []
        for seed in range(11):
            rng = np.random.default_rng(seed)
            data = center(rng.standard_normal((100, 20)), rng.standard_normal((100, 20)))
            res = select_gamma(data, 50, method)
            positions.append(int(np.searchsorted(res.grid, res.chosen)))
        assert np.median(positions) >= 25, positions

    def test_support_is_full_data_fit(self):
        sim = simulate(SimConfig(n=80, p=20, q=10, R_true=1, sparsity_j=1.5, seed=8,
                                 cov_schedule=(100.0,)))
        res = select_gamma(sim.data, 20, "press")
        from plspress import sparse_rank_one

        fit = sparse_rank_one(sim.data.X.T @ sim.data.Y, res.chosen)
        assert_array_equal(res.support, fit.support)


class TestSensitivity:
    def test_single_trial_deterministic(self):
        a = sensitivity_experiment("select_R", 30, 8, 8, 1, seed=5)
        b = sensitivity_experiment("select_R", 30, 8, 8, 1, seed=5)
        assert repr(a.row()) == repr(b.row())
        assert repr(a.outcomes) == repr(b.outcomes)

    def test_parallel_matches_serial(self):
        a = sensitivity_experiment("select_gamma", 30, 8, 6, 3, seed=2, grid_size=10)
        b = sensitivity_experiment("select_gamma", 30, 8, 6, 3, seed=2, grid_size=10, n_jobs=2)
        assert repr(a.row()) == repr(b.row())
        assert repr(a.outcomes) == repr(b.outcomes)

    def test_record_bounds(self):
        rec = sensitivity_experiment("select_R", 40, 10, 10, 4, seed=9)
        assert 0 <= rec.hits_press <= rec.trials and 0 <= rec.hits_loocv <= rec.trials
        assert rec.trials + rec.failures == 4
        if rec.hits_loocv == 0:
            assert np.isnan(rec.ratio) and not rec.ratio_defined

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            sensitivity_experiment("select_both", 30, 8, 8, 1, seed=0)

    @pytest.mark.slow
    def test_rank_selection_agreement_n200(self):
        rec = sensitivity_experiment("select_R", 200, 100, 100, 50, seed=200)
        assert rec.agreement >= 0.95, rec.row()

    @pytest.mark.slow
    def test_rank_selection_ratio_n500(self):
        rec = sensitivity_experiment("select_R", 500, 100, 100, 50, seed=500)
        assert rec.ratio_defined and abs(rec.ratio - 1.0) <= 0.05, rec.row()
