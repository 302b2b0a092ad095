import json

import pytest
from pydantic import ValidationError

from helpers import write_text
from utilities.error_handler import ConfigError, DataError, FileError
from validation.data_models import (
    DecisionRow,
    DecisionTable,
    GBMHyperparams,
    PipEstimate,
    ReplicationStudySpec,
    ResamplingConfig,
    SimulationConfig,
    StudyKind,
    TwoSampleScenario,
    UniformCovariateParams,
)
from validation.data_validator import DataValidator


@pytest.fixture
def validator() -> DataValidator:
    return DataValidator()


class TestModels:
    def test_estimate_bounds_bracket(self):
        with pytest.raises(ValidationError):
            PipEstimate(estimate=0.5, lower_bound=0.6, method="repCV5")
        with pytest.raises(ValidationError):
            PipEstimate(estimate=0.5, upper_bound=0.4, method="repCV5")
        with pytest.raises(ValidationError):
            PipEstimate(estimate=1.2, method="C1")

    def test_estimate_record(self):
        estimate = PipEstimate(estimate=0.61234567, lower_bound=0.5, upper_bound=0.7, method="repCV5", seed=3,
                               meta={"repeats": 10, "k": 5, "delta_mse": -0.1234567})
        record = estimate.to_record()
        assert record["estimate"] == 0.612346
        assert list(record["meta"]) == ["delta_mse", "k", "repeats"]
        assert record["meta"]["delta_mse"] == -0.123457

    def test_uniform_interval(self):
        with pytest.raises(ValidationError):
            UniformCovariateParams(beta1=1.0, sigma=1.0, a=2.0, b=2.0)

    def test_resampling_limits(self):
        assert ResamplingConfig().repeats == 10
        for bad in ({"k": 1}, {"alpha": 0.0}, {"split_ratio": 1.0}, {"repeats": 0}, {"unknown": 1}):
            with pytest.raises(ValidationError):
                ResamplingConfig(**bad)

    def test_balanced_scenario(self):
        with pytest.raises(ValidationError):
            TwoSampleScenario(n=21, beta1=-1.0)
        assert TwoSampleScenario(n=20, beta1=-1.0).label == "two_sample_n20_b-1"

    def test_gbm_hyperparams(self):
        with pytest.raises(ValidationError):
            GBMHyperparams(shrinkage=0.0)

    def test_replication_spec_requirements(self):
        with pytest.raises(ValidationError):
            ReplicationStudySpec(study_name="g", outcome_kind="gaussian", n1=10, n2=10, mean1=1.0, mean2=2.0)
        with pytest.raises(ValidationError):
            ReplicationStudySpec(study_name="b", outcome_kind="binomial", n1=10, n2=10, p1=0.2)
        with pytest.raises(ValidationError):
            ReplicationStudySpec(study_name="s", outcome_kind="gaussian", n1=10, n2=10, mean1=1.0, mean2=2.0,
                                 sd1=1.0, sd2=1.0, generation="seed_search")

    def test_simulation_study_kinds(self):
        with pytest.raises(ValidationError):
            SimulationConfig(study="gbm", estimators=["C1"])
        with pytest.raises(ValidationError):
            SimulationConfig(study="two_sample", estimators=["C1", "C1"])
        with pytest.raises(ValidationError):
            SimulationConfig(study="two_sample", two_sample=[{"n": 20, "beta1": 0.0}, {"n": 20, "beta1": 0.0}])

    def test_decision_table(self):
        table = DecisionTable(rows=[DecisionRow(scenario="s", n=20, beta1=0.0, rule="p<0.05", correct=3, runs=4)])
        assert table.rate("s", "p<0.05") == 75.0
        assert table.to_records()[0]["rate"] == 75.0
        with pytest.raises(KeyError):
            table.rate("s", "PIP>0.5")


class TestLoadCsv:
    def test_fixture(self, validator, fixture_csv):
        data = validator.load_csv(str(fixture_csv), "y", ["x"])
        assert data.n == 40
        assert data.column_names == ("x",)
        assert validator.get_validation_summary()["passed"] == 1

    def test_all_other_columns_by_default(self, validator, tmp_path):
        csv = write_text(tmp_path / "wide.csv", "a,y,b\n1,2,3\n4,5,6\n7,8,9\n")
        data = validator.load_csv(str(csv), "y")
        assert data.column_names == ("a", "b")

    def test_missing_file(self, validator, tmp_path):
        with pytest.raises(FileError):
            validator.load_csv(str(tmp_path / "none.csv"), "y")

    def test_missing_column(self, validator, fixture_csv):
        with pytest.raises(DataError, match="columns not found"):
            validator.load_csv(str(fixture_csv), "y", ["z"])

    def test_missing_cell_reports_row(self, validator, tmp_path):
        csv = write_text(tmp_path / "hole.csv", "y,x\n1,0\n2,1\n3,\n4,1\n")
        with pytest.raises(DataError, match=r"\[3\]"):
            validator.load_csv(str(csv), "y", ["x"])

    def test_non_numeric(self, validator, tmp_path):
        csv = write_text(tmp_path / "text.csv", "y,x\n1,a\n2,b\n3,c\n")
        with pytest.raises(DataError, match="non-numeric"):
            validator.load_csv(str(csv), "y", ["x"])

    def test_failures_are_counted(self, validator, tmp_path, fixture_csv):
        with pytest.raises(FileError):
            validator.load_csv(str(tmp_path / "none.csv"), "y")
        validator.load_csv(str(fixture_csv), "y", ["x"])
        summary = validator.get_validation_summary()
        assert (summary["checked"], summary["passed"], summary["failed"]) == (2, 1, 1)
        assert summary["failures"][0]["kind"] == "csv"
        assert summary["failures"][0]["error"].startswith("FileError")
        validator.reset_validation_stats()
        assert validator.get_validation_summary()["checked"] == 0

    def test_summary_table(self, validator, fixture_csv, capsys):
        validator.load_csv(str(fixture_csv), "y", ["x"])
        validator.display_validation_summary()
        err = capsys.readouterr().err
        assert "Inputs" in err
        assert "ok" in err


class TestLoadConfig:
    def test_bundled_simulation_configs(self, validator, configs_dir):
        two_sample = validator.load_simulation_config(str(configs_dir / "two_sample_study.json"))
        assert two_sample.study == StudyKind.TWO_SAMPLE
        assert len(two_sample.two_sample) == 6
        assert two_sample.resampling.stratify_by == "x"
        boosting = validator.load_simulation_config(str(configs_dir / "gbm_study.json"))
        assert boosting.study == StudyKind.GBM
        assert [s.n for s in boosting.nonlinear] == [40, 100, 400]

    def test_bundled_replication_config(self, validator, configs_dir):
        cfg = validator.load_replication_config(str(configs_dir / "replication.json"))
        assert cfg.master_seed == 20220101
        assert [s.study_name for s in cfg.studies] == ["Gervais", "Ackerman", "Balafoutas", "Wilson"]

    def test_invalid_json(self, validator, tmp_path):
        path = write_text(tmp_path / "broken.json", "{not json")
        with pytest.raises(ConfigError, match="not valid JSON"):
            validator.load_simulation_config(str(path))

    def test_not_an_object(self, validator, tmp_path):
        path = write_text(tmp_path / "list.json", "[]")
        with pytest.raises(ConfigError):
            validator.load_replication_config(str(path))

    def test_schema_violation_names_field(self, validator, tmp_path):
        path = write_text(tmp_path / "bad.json", json.dumps({"study": "two_sample", "n_mc": 0}))
        with pytest.raises(ConfigError, match="n_mc"):
            validator.load_simulation_config(str(path))

    def test_missing_file(self, validator, tmp_path):
        with pytest.raises(FileError):
            validator.load_replication_config(str(tmp_path / "absent.json"))
