import numpy as np
import pandas as pd
import pytest

from core.rng import RngStream
from sim.gbm_study import RULES as GBM_RULES
from sim.gbm_study import run_gbm_study
from sim.generators import TwoSampleTruth, balanced_two_sample, gen_linear_uniform, nonlinear_rows
from sim.replication import binomial_data, moment_matched, normal_scores, run_replication
from sim.results import emit_results, make_record, records_frame, tally
from sim.two_sample_study import RULES, _decisions, run_two_sample_study
from utilities.batch_processor import BatchProcessor
from utilities.error_handler import ConfigError, InvalidArgumentError
from validation.data_models import (
    EstimatorName,
    GBMHyperparams,
    NonlinearScenario,
    PipEstimate,
    ReplicationStudySpec,
    ResamplingConfig,
    TwoSampleParams,
    TwoSampleScenario,
)
from validation.data_validator import DataValidator

SMALL_ESTIMATORS = [EstimatorName.C1, EstimatorName.C2, EstimatorName.EXP, EstimatorName.CV5,
                    EstimatorName.REPCV5, EstimatorName.SS]


class TestGenerators:
    def test_balanced_layout(self):
        data = balanced_two_sample(20, 1.0, -1.0, 1.0, RngStream(1))
        np.testing.assert_array_equal(data.column("x"), np.repeat([0.0, 1.0], 10))
        assert data.column_names == ("x",)

    def test_balanced_is_reproducible(self):
        a = balanced_two_sample(40, 0.0, -1.0, 1.0, RngStream(3, 2)).outcomes
        b = balanced_two_sample(40, 0.0, -1.0, 1.0, RngStream(3, 2)).outcomes
        np.testing.assert_array_equal(a, b)

    def test_balanced_needs_even_n(self):
        with pytest.raises(InvalidArgumentError):
            balanced_two_sample(21, 0.0, -1.0, 1.0, RngStream(1))

    def test_uniform_covariate_range(self):
        data = gen_linear_uniform(500, 0.0, 1.0, 1.0, -2.0, 3.0, RngStream(4))
        x = data.column("x")
        assert x.min() >= -2.0
        assert x.max() < 3.0

    def test_nonlinear_covariates(self):
        data = nonlinear_rows(300, 1.6, RngStream(5))
        assert data.column_names == ("x1", "x2", "x3", "x4", "x5")
        x1, x3, x4, x5 = (data.column(c) for c in ("x1", "x3", "x4", "x5"))
        assert set(np.unique(x1)) <= set(range(7))
        assert set(np.unique(x3)) <= {0.0, 1.0}
        np.testing.assert_allclose(x4, np.round(x4, 1))
        assert x5.min() >= 1.0 and x5.max() <= 2.0

    def test_two_sample_truth(self):
        data = TwoSampleTruth(TwoSampleParams(beta1=-1.0, sigma=1.0)).sample(2000, RngStream(6))
        groups = data.binary_groups("x")
        assert 0.45 < groups.mean() < 0.55


class TestDecisions:
    def test_ties_prefer_null(self):
        repcv = PipEstimate(estimate=0.5, lower_bound=0.4, upper_bound=0.6, method="repCV5",
                            meta={"delta_mse": 0.0})
        null_truth = _decisions(0.0, 0.5, {EstimatorName.REPCV5: repcv})
        assert all(null_truth.values())
        alt_truth = _decisions(-1.0, 0.5, {EstimatorName.REPCV5: repcv})
        assert not any(alt_truth.values())

    def test_single_cv_fallback(self):
        cv = PipEstimate(estimate=0.7, method="CV5", meta={"delta_mse": -0.2})
        decisions = _decisions(-1.0, 0.01, {EstimatorName.CV5: cv})
        assert decisions == {"p<0.05": True, "dMSE<0": True, "PIP>0.5": True}

    def test_tally_skips_missing_rules(self):
        table = tally("s", 20, 0.0, ["a", "b"], [{"a": True}, {"a": False}])
        assert len(table.rows) == 1
        assert table.rate("s", "a") == 50.0


class TestTwoSampleStudy:
    def test_records_and_rules(self):
        scenario = TwoSampleScenario(name="small", n=20, beta1=-1.0, runs=4, master_seed=11)
        result = run_two_sample_study(scenario, SMALL_ESTIMATORS, n_mc=2000)
        assert len(result.records) == 4 * len(SMALL_ESTIMATORS)
        assert [r["estimator"] for r in result.records[:6]] == [e.value for e in SMALL_ESTIMATORS]
        assert {row.rule for row in result.table.rows} == set(RULES)
        assert all(row.runs == 4 for row in result.table.rows)
        first_run = [r for r in result.records if r["run"] == 0]
        assert len({r["p_value"] for r in first_run}) == 1

    def test_worker_count_does_not_matter(self):
        scenario = TwoSampleScenario(name="det", n=20, beta1=0.0, runs=6, master_seed=12)
        estimators = [EstimatorName.C1, EstimatorName.CV5, EstimatorName.REPCV5]
        cfg = ResamplingConfig(repeats=3)
        single = run_two_sample_study(scenario, estimators, cfg)
        pooled = run_two_sample_study(scenario, estimators, cfg,
                                      processor=BatchProcessor(max_workers=4, show_progress=False))
        assert single.records == pooled.records
        assert single.table == pooled.table

    def test_conditional_oracle(self):
        scenario = TwoSampleScenario(name="cond", n=20, beta1=-4.0, runs=2, master_seed=13)
        result = run_two_sample_study(scenario, [EstimatorName.COND], n_t=5000)
        assert all(r["estimator"] == "COND" for r in result.records)
        assert all(0.5 < r["estimate"] <= 1.0 for r in result.records)

    @pytest.mark.slow
    def test_null_scenario_rates(self):
        scenario = TwoSampleScenario(name="n20_b0", n=20, beta1=0.0, runs=1000, master_seed=20220101)
        result = run_two_sample_study(scenario, [EstimatorName.CV5, EstimatorName.REPCV5],
                                      ResamplingConfig(stratify_by="x"),
                                      processor=BatchProcessor(max_workers=4, show_progress=False))
        assert result.table.rate("n20_b0", "p<0.05") == pytest.approx(95.0, abs=2.5)
        assert result.table.rate("n20_b0", "PIP_LB>0.5") > result.table.rate("n20_b0", "PIP>0.5")

    @pytest.mark.slow
    def test_small_effect_rates(self):
        scenario = TwoSampleScenario(name="n20_b-1", n=20, beta1=-1.0, sigma=2.0, runs=1000, master_seed=20220102)
        result = run_two_sample_study(scenario, [EstimatorName.CV5, EstimatorName.REPCV5],
                                      ResamplingConfig(stratify_by="x"),
                                      processor=BatchProcessor(max_workers=4, show_progress=False))
        assert result.table.rate("n20_b-1", "p<0.05") == pytest.approx(18.30, abs=3.5)
        assert result.table.rate("n20_b-1", "dMSE<0") == pytest.approx(41.13, abs=4.5)
        assert result.table.rate("n20_b-1", "PIP_LB>0.5") == pytest.approx(31.62, abs=4.5)
        assert result.table.rate("n20_b-1", "PIP>0.5") == pytest.approx(57.59, abs=4.5)

    @pytest.mark.slow
    def test_large_effect_is_always_found(self):
        scenario = TwoSampleScenario(name="n400_b-1", n=400, beta1=-1.0, sigma=2.0, runs=1000,
                                     master_seed=20220105)
        result = run_two_sample_study(scenario, [EstimatorName.CV5, EstimatorName.REPCV5],
                                      ResamplingConfig(stratify_by="x"),
                                      processor=BatchProcessor(max_workers=4, show_progress=False))
        assert result.table.rate("n400_b-1", "p<0.05") >= 98.0
        assert result.table.rate("n400_b-1", "dMSE<0") >= 98.0
        assert result.table.rate("n400_b-1", "PIP>0.5") >= 90.0
        assert result.table.rate("n400_b-1", "PIP_LB>0.5") >= 90.0


class TestGBMStudy:
    def test_small_study(self):
        scenario = NonlinearScenario(name="tiny", n=40, runs=2, master_seed=21)
        result = run_gbm_study(scenario, ResamplingConfig(repeats=2), hp=GBMHyperparams(n_trees=5))
        assert len(result.records) == 6
        assert {row.rule for row in result.table.rows} == set(GBM_RULES)
        assert all(r["beta1"] is None and r["p_value"] is None for r in result.records)

    def test_rejects_plug_in_estimators(self):
        scenario = NonlinearScenario(n=40, runs=1)
        with pytest.raises(ConfigError):
            run_gbm_study(scenario, estimators=[EstimatorName.C1])

    @pytest.mark.slow
    def test_bundled_small_samples(self, configs_dir):
        cfg = DataValidator().load_simulation_config(str(configs_dir / "gbm_study.json"))
        processor = BatchProcessor(max_workers=4, show_progress=False)
        scenarios = {s.label: s for s in cfg.nonlinear}
        rates = {}
        for label in ("n40", "n100"):
            result = run_gbm_study(scenarios[label], cfg.resampling, cfg.estimators, cfg.gbm, processor)
            rates[label] = {row.rule: row.rate for row in result.table.rows}
        assert rates["n100"]["CV5"] >= 95.0
        assert rates["n100"]["repCV5"] >= 95.0
        assert rates["n40"]["SS"] < rates["n40"]["repCV5"]


class TestResultsFile:
    def test_header_only(self, tmp_path):
        path = emit_results([], tmp_path / "records.csv")
        assert path.read_text() == "scenario,run,n,beta1,estimator,estimate,lower,upper,p_value,delta_mse,seed\n"

    def test_six_decimals(self, tmp_path):
        estimate = PipEstimate(estimate=0.123456789, method="CV5", meta={"delta_mse": -0.5})
        record = make_record("s", 0, 20, -1.0, estimate, 0.04, 7)
        path = emit_results([record], tmp_path / "records.csv")
        frame = pd.read_csv(path)
        line = path.read_text().splitlines()[1]
        assert "0.123457" in line
        assert frame.loc[0, "estimator"] == "CV5"
        assert pd.isna(frame.loc[0, "lower"])
        assert list(records_frame([record]).columns)[0] == "scenario"


class TestReplication:
    def test_moment_matching_is_exact(self):
        y = moment_matched(26, 41.42, 31.47, RngStream(1))
        assert y.mean() == pytest.approx(41.42, abs=1e-10)
        assert y.std(ddof=1) == pytest.approx(31.47, rel=1e-12)

    def test_normal_scores(self):
        y = normal_scores(15, 3.20, 2.23)
        assert y.mean() == pytest.approx(3.20, abs=1e-12)
        assert y.std(ddof=1) == pytest.approx(2.23, rel=1e-12)
        assert np.all(np.diff(y) > 0)
        np.testing.assert_allclose(y - 3.20, -(y[::-1] - 3.20), atol=1e-12)
        np.testing.assert_array_equal(y, normal_scores(15, 3.20, 2.23))

    def test_binomial_counts(self):
        spec = ReplicationStudySpec(study_name="b", outcome_kind="binomial", n1=36, n2=36, p1=0.306, p2=0.583)
        data, counts = binomial_data(spec)
        assert counts == (11, 21)
        assert data.outcomes.sum() == 32

    def test_bundled_studies(self, configs_dir):
        cfg = DataValidator().load_replication_config(str(configs_dir / "replication.json"))
        results = {r.study_name: r for r in run_replication(cfg.studies, cfg.resampling, cfg.master_seed)}
        assert list(results) == ["Gervais", "Ackerman", "Balafoutas", "Wilson"]
        assert results["Gervais"].p_value == pytest.approx(0.0291, abs=0.002)
        assert results["Ackerman"].p_value == pytest.approx(0.0488, abs=0.0005)
        assert results["Balafoutas"].p_value == pytest.approx(0.0177, abs=5e-4)
        assert results["Wilson"].p_value < 0.001
        for result in results.values():
            pip = result.pip
            assert pip.lower_bound <= pip.estimate <= pip.upper_bound
            assert pip.meta["repeats"] == 10
        assert results["Wilson"].pip.estimate > results["Gervais"].pip.estimate

    def test_records_are_rounded(self, configs_dir):
        cfg = DataValidator().load_replication_config(str(configs_dir / "replication.json"))
        result = run_replication(cfg.studies[:1], cfg.resampling, cfg.master_seed)[0]
        record = result.to_record()
        assert record["study"] == "Gervais"
        assert record["generation"] == "normal_scores"
        assert record["pip"] == round(result.pip.estimate, 6)

    def test_no_studies(self):
        assert run_replication([]) == []

    def test_published_pip_bands_over_seeds(self, configs_dir):
        cfg = DataValidator().load_replication_config(str(configs_dir / "replication.json"))
        studies = [s for s in cfg.studies if s.study_name in ("Gervais", "Wilson")]
        p_values = set()
        for seed in range(20):
            gervais, wilson = run_replication(studies, cfg.resampling, seed)
            assert 0.46 <= gervais.pip.estimate <= 0.58
            assert 0.64 <= wilson.pip.estimate <= 0.78
            p_values.add((gervais.p_value, wilson.p_value))
        assert len(p_values) == 1
