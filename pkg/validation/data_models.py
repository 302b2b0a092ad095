#!/usr/bin/env python3
"""
Data Models for the PIP toolkit
Pydantic models for estimates, parameter sets, resampling settings, study scenarios and
configuration files.
"""

from enum import Enum
from typing import Any, Dict, List, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

import config


class TiePolicy(str, Enum):
    """How equal losses count in the improvement indicator."""
    STRICT = "strict"
    HALF_CREDIT = "half_credit"


class LossKind(str, Enum):
    """Loss function family."""
    SQUARED_ERROR = "squared_error"
    CUSTOM = "custom"


class ModelFamily(str, Enum):
    """Prediction model families available to the fitters."""
    OLS = "ols"
    GBM = "gbm"


class EstimatorName(str, Enum):
    """PIP estimators known to the study runners."""
    C1 = "C1"
    C2 = "C2"
    EXP = "Exp"
    LOO = "LOO"
    CV5 = "CV5"
    REPCV5 = "repCV5"
    SS = "SS"
    COND = "COND"


class OutcomeKind(str, Enum):
    GAUSSIAN = "gaussian"
    BINOMIAL = "binomial"


class GenerationMode(str, Enum):
    """How replication data are generated from the reported summary statistics."""
    MOMENT_MATCHED = "moment_matched"
    NORMAL_SCORES = "normal_scores"
    SEED_SEARCH = "seed_search"


class StudyKind(str, Enum):
    TWO_SAMPLE = "two_sample"
    GBM = "gbm"


MetaValue = Union[int, float, str]


class PipEstimate(BaseModel):
    """Estimated probability of improved prediction with optional quantile bounds."""
    model_config = ConfigDict(frozen=True)

    estimate: float = Field(..., ge=0, le=1, description="Point estimate")
    lower_bound: Optional[float] = Field(None, ge=0, le=1, description="Lower quantile bound")
    upper_bound: Optional[float] = Field(None, ge=0, le=1, description="Upper quantile bound")
    method: str = Field(..., min_length=1, description="Estimator tag")
    seed: Optional[int] = Field(None, ge=0, lt=2**64, description="Master seed of the stream used")
    meta: Dict[str, MetaValue] = Field(default_factory=dict, description="k, repeats, n_train, ...")

    @model_validator(mode='after')
    def validate_bounds(self):
        """Bounds must bracket the estimate."""
        if self.lower_bound is not None and self.lower_bound > self.estimate:
            raise ValueError(f'lower_bound {self.lower_bound} exceeds estimate {self.estimate}')
        if self.upper_bound is not None and self.upper_bound < self.estimate:
            raise ValueError(f'upper_bound {self.upper_bound} is below estimate {self.estimate}')
        return self

    def to_record(self, decimals: int = config.FLOAT_DECIMALS) -> Dict[str, Any]:
        """JSON-ready record with rounded numbers."""
        def rnd(value):
            if isinstance(value, float):
                return round(value, decimals)
            return value
        return {
            'method': self.method,
            'estimate': rnd(self.estimate),
            'lower': rnd(self.lower_bound),
            'upper': rnd(self.upper_bound),
            'seed': self.seed,
            'meta': {key: rnd(value) for key, value in sorted(self.meta.items())},
        }


class TwoSampleParams(BaseModel):
    """True parameters of the two-sample model Y | x ~ N(beta0 + beta1 x, sigma^2)."""
    model_config = ConfigDict(frozen=True)

    beta0: float = Field(0.0, description="Intercept")
    beta1: float = Field(..., description="Group effect")
    sigma: float = Field(..., gt=0, description="Error standard deviation")


class UniformCovariateParams(BaseModel):
    """Simple linear regression with X* ~ U[a, b]."""
    model_config = ConfigDict(frozen=True)

    beta0: float = 0.0
    beta1: float
    sigma: float = Field(..., gt=0)
    a: float
    b: float

    @model_validator(mode='after')
    def validate_interval(self):
        if not self.a < self.b:
            raise ValueError(f'interval requires a < b, got [{self.a}, {self.b}]')
        return self


class OLSMoments(BaseModel):
    """Sampling moments of a simple-regression OLS fit used by the expected-PIP estimator."""
    model_config = ConfigDict(frozen=True)

    sigma: float = Field(..., gt=0, description="Error standard deviation")
    var_b0: float = Field(..., ge=0, description="Variance of the intercept estimator")
    var_b1: float = Field(..., ge=0, description="Variance of the slope estimator")
    cov_b01: float = Field(0.0, description="Covariance of intercept and slope estimators")
    x_bar: float = Field(..., description="Training covariate mean")


class GBMHyperparams(BaseModel):
    """Fixed boosting hyperparameters."""
    model_config = ConfigDict(frozen=True, extra='forbid')

    n_trees: int = Field(config.GBM_N_TREES, ge=1)
    interaction_depth: int = Field(config.GBM_INTERACTION_DEPTH, ge=1)
    shrinkage: float = Field(config.GBM_SHRINKAGE, gt=0, le=1)
    min_obs_per_node: int = Field(config.GBM_MIN_OBS_PER_NODE, ge=1)


class ResamplingConfig(BaseModel):
    """Settings shared by the split-sample and cross-validation estimators."""
    model_config = ConfigDict(frozen=True, extra='forbid')

    k: int = Field(config.DEFAULT_K, ge=2, description="Fold count")
    repeats: int = Field(config.DEFAULT_REPEATS, ge=1, description="Repeats M of k-fold CV")
    alpha: float = Field(config.DEFAULT_ALPHA, gt=0, lt=1, description="Quantile level of the bounds")
    split_ratio: float = Field(config.DEFAULT_SPLIT_RATIO, gt=0, lt=1, description="Training share")
    tie_policy: TiePolicy = TiePolicy.STRICT
    seed: int = Field(config.DEFAULT_SEED, ge=0, lt=2**64)
    stratify_by: Optional[str] = Field(None, description="Binary group column to stratify on")


class TwoSampleTestResult(BaseModel):
    """Pooled-variance t-test for a regression coefficient."""
    model_config = ConfigDict(frozen=True)

    t_statistic: float
    df: int = Field(..., ge=1)
    p_value: float = Field(..., ge=0, le=1)
    beta1_hat: float
    se_beta1: float = Field(..., ge=0)


class TwoSampleScenario(BaseModel):
    """Balanced two-sample simulation scenario."""
    model_config = ConfigDict(frozen=True, extra='forbid')

    name: Optional[str] = None
    n: int = Field(..., ge=4)
    beta0: float = 0.0
    beta1: float
    sigma: float = Field(1.0, gt=0)
    runs: int = Field(config.DEFAULT_RUNS, ge=1)
    master_seed: int = Field(config.DEFAULT_SEED, ge=0, lt=2**64)

    @field_validator('n')
    def validate_balanced(cls, v):
        """Balanced design needs an even sample size."""
        if v % 2:
            raise ValueError(f'n must be even for a balanced design, got {v}')
        return v

    @property
    def label(self) -> str:
        return self.name or f"two_sample_n{self.n}_b{self.beta1:g}"


class NonlinearScenario(BaseModel):
    """Nonlinear data-generating scenario for the boosting study."""
    model_config = ConfigDict(frozen=True, extra='forbid')

    name: Optional[str] = None
    n: int = Field(..., ge=10)
    noise_sd: float = Field(config.NONLINEAR_NOISE_SD, gt=0)
    runs: int = Field(100, ge=1)
    master_seed: int = Field(config.DEFAULT_SEED, ge=0, lt=2**64)

    @property
    def label(self) -> str:
        return self.name or f"nonlinear_n{self.n}"


class ReplicationStudySpec(BaseModel):
    """Summary statistics of a published two-group study."""
    model_config = ConfigDict(frozen=True, extra='forbid')

    study_name: str = Field(..., min_length=1)
    outcome_kind: OutcomeKind
    n1: int = Field(..., ge=2)
    n2: int = Field(..., ge=2)
    mean1: Optional[float] = None
    mean2: Optional[float] = None
    sd1: Optional[float] = Field(None, gt=0)
    sd2: Optional[float] = Field(None, gt=0)
    p1: Optional[float] = Field(None, ge=0, le=1)
    p2: Optional[float] = Field(None, ge=0, le=1)
    generation: GenerationMode = GenerationMode.MOMENT_MATCHED
    target_p_value: Optional[float] = Field(None, gt=0, lt=1)
    p_tolerance: float = Field(config.SEED_SEARCH_TOLERANCE, gt=0)
    max_attempts: int = Field(config.SEED_SEARCH_MAX_ATTEMPTS, ge=1)

    @model_validator(mode='after')
    def validate_outcome_parameters(self):
        """Gaussian studies need means and SDs, binomial studies need proportions."""
        if self.outcome_kind == OutcomeKind.GAUSSIAN:
            missing = [f for f in ('mean1', 'mean2', 'sd1', 'sd2') if getattr(self, f) is None]
            if missing:
                raise ValueError(f'gaussian study {self.study_name!r} is missing {missing}')
        else:
            missing = [f for f in ('p1', 'p2') if getattr(self, f) is None]
            if missing:
                raise ValueError(f'binomial study {self.study_name!r} is missing {missing}')
            if self.generation != GenerationMode.MOMENT_MATCHED:
                raise ValueError('binomial studies are built from exact counts')
        if self.generation == GenerationMode.SEED_SEARCH and self.target_p_value is None:
            raise ValueError(f'seed_search for {self.study_name!r} requires target_p_value')
        return self


class DecisionRow(BaseModel):
    """Share of runs in which a decision rule picked the right model."""
    model_config = ConfigDict(frozen=True)

    scenario: str
    n: int
    beta1: Optional[float] = None
    rule: str
    correct: int = Field(..., ge=0)
    runs: int = Field(..., ge=1)

    @property
    def rate(self) -> float:
        return 100.0 * self.correct / self.runs


class DecisionTable(BaseModel):
    """Correct-decision rates (in %) per scenario and rule."""
    rows: List[DecisionRow] = Field(default_factory=list)

    def rate(self, scenario: str, rule: str) -> float:
        for row in self.rows:
            if row.scenario == scenario and row.rule == rule:
                return row.rate
        raise KeyError(f'no decision row for scenario {scenario!r} and rule {rule!r}')

    def to_records(self, decimals: int = config.FLOAT_DECIMALS) -> List[Dict[str, Any]]:
        return [
            {
                'scenario': row.scenario, 'n': row.n, 'beta1': row.beta1, 'rule': row.rule,
                'correct': row.correct, 'runs': row.runs, 'rate': round(row.rate, decimals),
            }
            for row in self.rows
        ]


GBM_ESTIMATORS = {EstimatorName.SS, EstimatorName.CV5, EstimatorName.REPCV5}


class SimulationConfig(BaseModel):
    """Simulation study configuration file."""
    model_config = ConfigDict(frozen=True, extra='forbid')

    study: StudyKind
    estimators: List[EstimatorName] = Field(
        default_factory=lambda: [EstimatorName.C1, EstimatorName.C2, EstimatorName.EXP,
                                 EstimatorName.CV5, EstimatorName.REPCV5, EstimatorName.SS])
    resampling: ResamplingConfig = Field(default_factory=ResamplingConfig)
    gbm: GBMHyperparams = Field(default_factory=GBMHyperparams)
    n_mc: int = Field(config.DEFAULT_N_MC, ge=1)
    n_t: int = Field(config.DEFAULT_N_T, ge=1)
    two_sample: List[TwoSampleScenario] = Field(default_factory=list)
    nonlinear: List[NonlinearScenario] = Field(default_factory=list)

    @model_validator(mode='after')
    def validate_study(self):
        """Estimators and scenarios must fit the study kind."""
        if len(set(self.estimators)) != len(self.estimators):
            raise ValueError('estimators must be unique')
        if self.study == StudyKind.GBM:
            unsupported = [e.value for e in self.estimators if e not in GBM_ESTIMATORS]
            if unsupported:
                raise ValueError(f'estimators {unsupported} are not available for gbm studies')
            if self.two_sample:
                raise ValueError('gbm studies take nonlinear scenarios only')
        elif self.nonlinear:
            raise ValueError('two_sample studies take two_sample scenarios only')
        labels = [s.label for s in (self.two_sample or self.nonlinear)]
        if len(set(labels)) != len(labels):
            raise ValueError(f'scenario names must be unique, got {labels}')
        return self


class ReplicationConfig(BaseModel):
    """Replication study configuration file."""
    model_config = ConfigDict(frozen=True, extra='forbid')

    master_seed: int = Field(config.DEFAULT_SEED, ge=0, lt=2**64)
    resampling: ResamplingConfig = Field(default_factory=ResamplingConfig)
    studies: List[ReplicationStudySpec] = Field(default_factory=list)
