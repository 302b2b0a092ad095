import math

import numpy as np
import pytest
from scipy import stats

from core.dataset import Dataset
from core.losses import SQUARED_ERROR
from core.rng import RngStream
from helpers import ols_kfold_reference
from models.fitters import get_fitter
from models.ols import fit_ols
from resampling.estimators import (
    kfold_pip,
    loo_pip,
    nearest_rank_quantile,
    repeated_kfold_pip,
    split_sample_pip,
    summarize_repeats,
)
from resampling.folds import make_folds, split_order
from sim.generators import balanced_two_sample
from utilities.batch_processor import BatchProcessor
from utilities.error_handler import DomainError, EstimationFailedError, SingularDesignError
from validation.data_models import GBMHyperparams, ResamplingConfig, TiePolicy


class TestFolds:
    def test_partition(self):
        plan = make_folds(23, 5, RngStream(1))
        sizes = plan.fold_sizes()
        assert sizes.sum() == 23
        assert sizes.max() - sizes.min() <= 1
        rows = np.sort(np.concatenate([plan.test_rows(f) for f in range(5)]))
        np.testing.assert_array_equal(rows, np.arange(23))
        assert len(plan.train_rows(0)) + len(plan.test_rows(0)) == 23

    def test_reproducible(self):
        a = make_folds(30, 5, RngStream(9)).assignments
        b = make_folds(30, 5, RngStream(9)).assignments
        np.testing.assert_array_equal(a, b)

    @pytest.mark.parametrize("k, n", [(1, 10), (11, 10)])
    def test_fold_count_domain(self, k, n):
        with pytest.raises(DomainError):
            make_folds(n, k, RngStream(1))

    def test_stratified_folds_are_balanced(self):
        strata = np.repeat([0, 1], 10)
        plan = make_folds(20, 5, RngStream(3), strata)
        for fold in range(5):
            assert strata[plan.test_rows(fold)].tolist().count(1) == 2

    def test_stratified_plan_ignores_labels(self):
        strata = np.repeat([0, 1], [12, 8])
        a = make_folds(20, 5, RngStream(4), strata).assignments
        b = make_folds(20, 5, RngStream(4), 1 - strata).assignments
        np.testing.assert_array_equal(a, b)

    def test_split_order_is_permutation(self):
        order = split_order(15, RngStream(5))
        np.testing.assert_array_equal(np.sort(order), np.arange(15))

    def test_stratified_split_halves(self):
        strata = np.repeat([0, 1], 10)
        order = split_order(20, RngStream(6), strata)
        assert strata[order[:10]].sum() == 5


class TestQuantiles:
    def test_nearest_rank(self):
        values = list(range(1, 11))
        assert nearest_rank_quantile(values, 0.05) == 1
        assert nearest_rank_quantile(values, 0.5) == 5
        assert nearest_rank_quantile(values, 0.95) == 10
        assert nearest_rank_quantile(values[::-1], 0.3) == 3

    def test_domain(self):
        with pytest.raises(DomainError):
            nearest_rank_quantile([], 0.5)
        with pytest.raises(DomainError):
            nearest_rank_quantile([1.0], 1.0)

    def test_identical_repeats(self):
        assert summarize_repeats([0.6] * 10, 0.05) == (0.6, 0.6, 0.6)

    def test_bounds_contain_mean(self):
        mean, lower, upper = summarize_repeats([0.5, 0.5, 0.5, 0.5, 0.9], 0.05)
        assert lower <= mean <= upper
        assert mean == pytest.approx(0.58)

    def test_inner_ranks_widen_to_mean(self):
        assert summarize_repeats([0.5] * 9 + [1.0], 0.4) == pytest.approx((0.55, 0.5, 0.55))

    def test_ten_repeats_give_extremes(self):
        values = [0.3, 0.7, 0.45, 0.5, 0.62, 0.38, 0.51, 0.49, 0.66, 0.41]
        mean, lower, upper = summarize_repeats(values, 0.05)
        assert (lower, upper) == (0.3, 0.7)
        assert mean == pytest.approx(sum(values) / 10)


class TestKFold:
    def test_matches_reference_evaluation(self, two_sample_data):
        estimate = kfold_pip(two_sample_data, [], ["x"], fit_ols, SQUARED_ERROR, 5, TiePolicy.STRICT,
                             RngStream(42))
        plan = make_folds(40, 5, RngStream(42))
        expected = ols_kfold_reference(two_sample_data.outcomes, two_sample_data.column("x"),
                                       plan.assignments, 5)
        assert estimate.estimate == pytest.approx(expected, abs=1e-12)
        assert estimate.method == "CV5"
        assert estimate.meta["k"] == 5
        assert estimate.seed == 42

    def test_perfect_separation(self):
        x = np.repeat([0.0, 1.0], 10)
        data = Dataset(10.0 * x, x.reshape(-1, 1), ("x",))
        estimate = kfold_pip(data, [], ["x"], fit_ols, SQUARED_ERROR, 5, TiePolicy.STRICT, RngStream(1), "x")
        assert estimate.estimate == 1.0
        assert estimate.meta["delta_mse"] < 0

    def test_identical_models_tie(self, two_sample_data):
        strict = kfold_pip(two_sample_data, ["x"], ["x"], fit_ols, SQUARED_ERROR, 5, TiePolicy.STRICT, RngStream(1))
        half = kfold_pip(two_sample_data, ["x"], ["x"], fit_ols, SQUARED_ERROR, 5, TiePolicy.HALF_CREDIT,
                         RngStream(1))
        assert strict.estimate == 0.0
        assert half.estimate == 0.5
        assert half.meta["delta_mse"] == 0.0

    def test_loo_is_deterministic(self, two_sample_data):
        a = loo_pip(two_sample_data, [], ["x"], fit_ols, SQUARED_ERROR, TiePolicy.STRICT, RngStream(1))
        b = loo_pip(two_sample_data, [], ["x"], fit_ols, SQUARED_ERROR, TiePolicy.STRICT, RngStream(2))
        assert a.estimate == pytest.approx(b.estimate, abs=1e-12)
        assert a.method == "LOO"
        assert a.meta["k"] == 40

    def test_failures_carry_fold_context(self, two_sample_data):
        def broken(data, covariates):
            raise SingularDesignError("rank deficient")

        with pytest.raises(EstimationFailedError) as info:
            kfold_pip(two_sample_data, [], ["x"], broken, SQUARED_ERROR, 5, TiePolicy.STRICT, RngStream(1))
        assert info.value.context == {"fold": 0}
        assert isinstance(info.value.cause, SingularDesignError)

    def test_boosted_models(self, linear_data):
        fitter = get_fitter("gbm", GBMHyperparams(n_trees=10))
        estimate = kfold_pip(linear_data, ["x2"], ["x1", "x2"], fitter, SQUARED_ERROR, 5, TiePolicy.STRICT,
                             RngStream(3))
        assert 0.0 <= estimate.estimate <= 1.0
        assert math.isfinite(estimate.meta["delta_mse"])


class TestRelabelling:
    @staticmethod
    def flipped(data: Dataset) -> Dataset:
        return Dataset(data.outcomes, 1.0 - data.covariates, data.column_names)

    def test_kfold(self, two_sample_data):
        a = kfold_pip(two_sample_data, [], ["x"], fit_ols, SQUARED_ERROR, 5, TiePolicy.STRICT, RngStream(5), "x")
        b = kfold_pip(self.flipped(two_sample_data), [], ["x"], fit_ols, SQUARED_ERROR, 5, TiePolicy.STRICT,
                      RngStream(5), "x")
        assert b.estimate == pytest.approx(a.estimate, abs=1e-12)
        assert b.meta["delta_mse"] == pytest.approx(a.meta["delta_mse"], abs=1e-12)

    def test_repeated(self, two_sample_data):
        cfg = ResamplingConfig(repeats=4, stratify_by="x")
        a = repeated_kfold_pip(two_sample_data, [], ["x"], fit_ols, SQUARED_ERROR, cfg, RngStream(6))
        b = repeated_kfold_pip(self.flipped(two_sample_data), [], ["x"], fit_ols, SQUARED_ERROR, cfg, RngStream(6))
        assert b.estimate == pytest.approx(a.estimate, abs=1e-12)
        assert b.meta["delta_mse"] == pytest.approx(a.meta["delta_mse"], abs=1e-12)

    def test_split(self, two_sample_data):
        cfg = ResamplingConfig(stratify_by="x")
        a = split_sample_pip(two_sample_data, [], ["x"], fit_ols, SQUARED_ERROR, cfg, RngStream(7))
        b = split_sample_pip(self.flipped(two_sample_data), [], ["x"], fit_ols, SQUARED_ERROR, cfg, RngStream(7))
        assert b.estimate == pytest.approx(a.estimate, abs=1e-12)
        assert b.meta["delta_mse"] == pytest.approx(a.meta["delta_mse"], abs=1e-12)


class TestSplitSample:
    def test_sizes_and_tag(self, two_sample_data):
        estimate = split_sample_pip(two_sample_data, [], ["x"], fit_ols, SQUARED_ERROR, ResamplingConfig(),
                                    RngStream(1))
        assert estimate.method == "SS"
        assert estimate.meta["n_train"] == 20
        assert estimate.meta["n_test"] == 20
        assert estimate.estimate * 20 == pytest.approx(round(estimate.estimate * 20))

    def test_degenerate_ratio(self):
        data = Dataset([1.0, 2.0, 3.0], [[0.0], [1.0], [0.0]], ("x",))
        with pytest.raises(DomainError):
            split_sample_pip(data, [], ["x"], fit_ols, SQUARED_ERROR, ResamplingConfig(split_ratio=0.2),
                             RngStream(1))


class TestRepeatedKFold:
    def test_single_repeat_collapses_bounds(self, two_sample_data):
        cfg = ResamplingConfig(repeats=1)
        estimate = repeated_kfold_pip(two_sample_data, [], ["x"], fit_ols, SQUARED_ERROR, cfg, RngStream(1))
        assert estimate.lower_bound == estimate.estimate == estimate.upper_bound

    def test_mean_of_child_streams(self, two_sample_data):
        cfg = ResamplingConfig(repeats=4)
        stream = RngStream(7)
        estimate = repeated_kfold_pip(two_sample_data, [], ["x"], fit_ols, SQUARED_ERROR, cfg, stream)
        singles = [kfold_pip(two_sample_data, [], ["x"], fit_ols, SQUARED_ERROR, 5, TiePolicy.STRICT,
                             stream.child(r)).estimate for r in range(4)]
        assert estimate.estimate == pytest.approx(math.fsum(singles) / 4, abs=1e-12)
        assert estimate.lower_bound <= estimate.estimate <= estimate.upper_bound
        assert estimate.method == "repCV5"
        assert estimate.meta["repeats"] == 4

    def test_worker_count_does_not_matter(self, two_sample_data):
        cfg = ResamplingConfig(repeats=6, stratify_by="x")
        sequential = repeated_kfold_pip(two_sample_data, [], ["x"], fit_ols, SQUARED_ERROR, cfg, RngStream(8))
        parallel = repeated_kfold_pip(two_sample_data, [], ["x"], fit_ols, SQUARED_ERROR, cfg, RngStream(8),
                                      processor=BatchProcessor(max_workers=3, show_progress=False))
        assert sequential == parallel

    @pytest.mark.slow
    def test_converges_on_large_samples(self):
        target = stats.norm.cdf(1.0)
        cfg = ResamplingConfig(stratify_by="x")
        estimates = []
        for run in range(200):
            stream = RngStream(20220301, run)
            data = balanced_two_sample(400, 0.0, -4.0, 1.0, stream.child(0))
            estimates.append(repeated_kfold_pip(data, [], ["x"], fit_ols, SQUARED_ERROR, cfg,
                                                stream.child(1)).estimate)
        estimates = np.array(estimates)
        assert np.mean(np.abs(estimates - target) <= 0.055) >= 0.95
        assert estimates.mean() == pytest.approx(target, abs=0.01)
