#!/usr/bin/env python3
"""
Two-sample simulation study.

Every run draws a balanced data set, fits m0 (intercept) and m1 (intercept + group),
computes the selected PIP estimators together with the t-test p-value and the
cross-validated MSE difference, and scores four decision rules:
- p < 0.05 rejects m0
- dMSE < 0 prefers m1 (repeated CV if available, else single CV)
- PIP_LB > 0.5 prefers m1 (lower bound of repeated CV)
- PIP > 0.5 prefers m1 (repeated CV if available, else single CV)
A decision is correct when it prefers m1 exactly when beta1 != 0; ties prefer m0.
"""

from __future__ import annotations

import logging
from typing import Dict, Iterable, List, Optional, Tuple

import config
from core.losses import SQUARED_ERROR
from core.rng import RngStream
from models.ols import fit_ols
from plugin.conditional import pip_conditional_empirical
from plugin.two_sample import pip_c1, pip_c2, pip_expected_from_fit
from relations.pvalues import pvalue_two_sample
from resampling.estimators import kfold_pip, loo_pip, repeated_kfold_pip, split_sample_pip
from sim.generators import GROUP, TwoSampleTruth, gen_two_sample
from sim.results import StudyResult, make_record, tally
from utilities.batch_processor import BatchProcessor
from validation.data_models import EstimatorName, PipEstimate, ResamplingConfig, TwoSampleParams, TwoSampleScenario

logger = logging.getLogger(__name__)

RULE_P = "p<0.05"
RULE_DMSE = "dMSE<0"
RULE_PIP_LB = "PIP_LB>0.5"
RULE_PIP = "PIP>0.5"
RULES = [RULE_P, RULE_DMSE, RULE_PIP_LB, RULE_PIP]

# fixed child stream per consumer inside a run
DATA_STREAM = 0
ESTIMATOR_STREAMS = {
    EstimatorName.EXP: 1,
    EstimatorName.LOO: 2,
    EstimatorName.CV5: 3,
    EstimatorName.REPCV5: 4,
    EstimatorName.SS: 5,
    EstimatorName.COND: 6,
}


def _decisions(beta1: float, p_value: float, by_name: Dict[EstimatorName, PipEstimate]) -> Dict[str, bool]:
    truth_prefers_full = beta1 != 0
    prefers: Dict[str, bool] = {RULE_P: p_value < config.SIGNIFICANCE_LEVEL}
    cv = by_name.get(EstimatorName.REPCV5) or by_name.get(EstimatorName.CV5)
    if cv is not None:
        prefers[RULE_DMSE] = cv.meta["delta_mse"] < 0
        prefers[RULE_PIP] = cv.estimate > 0.5
    if EstimatorName.REPCV5 in by_name:
        prefers[RULE_PIP_LB] = by_name[EstimatorName.REPCV5].lower_bound > 0.5
    return {rule: choice == truth_prefers_full for rule, choice in prefers.items()}


def run_two_sample_once(s: TwoSampleScenario, run: int, estimators: Iterable[EstimatorName],
                        cfg: ResamplingConfig, n_mc: int = config.DEFAULT_N_MC,
                        n_t: int = config.DEFAULT_N_T) -> Tuple[List[dict], Dict[str, bool]]:
    """One simulation run on stream (master_seed, run)."""
    stream = RngStream(s.master_seed, run)
    data = gen_two_sample(s, stream.child(DATA_STREAM))
    fit0 = fit_ols(data, [])
    fit1 = fit_ols(data, [GROUP])
    test = pvalue_two_sample(data)
    null_spec, full_spec = [], [GROUP]

    def child(name: EstimatorName) -> RngStream:
        return stream.child(ESTIMATOR_STREAMS[name])

    by_name: Dict[EstimatorName, PipEstimate] = {}
    for name in estimators:
        if name == EstimatorName.C1:
            estimate = pip_c1(fit1.coefficient(GROUP), fit1.sigma)
        elif name == EstimatorName.C2:
            estimate = pip_c2(data, fit0, fit1)
        elif name == EstimatorName.EXP:
            estimate = pip_expected_from_fit(data, n_mc, child(name), fit1=fit1, tie_policy=cfg.tie_policy)
        elif name == EstimatorName.LOO:
            estimate = loo_pip(data, null_spec, full_spec, fit_ols, SQUARED_ERROR, cfg.tie_policy, child(name))
        elif name == EstimatorName.CV5:
            estimate = kfold_pip(data, null_spec, full_spec, fit_ols, SQUARED_ERROR, cfg.k, cfg.tie_policy,
                                 child(name), cfg.stratify_by)
        elif name == EstimatorName.REPCV5:
            estimate = repeated_kfold_pip(data, null_spec, full_spec, fit_ols, SQUARED_ERROR, cfg, child(name))
        elif name == EstimatorName.SS:
            estimate = split_sample_pip(data, null_spec, full_spec, fit_ols, SQUARED_ERROR, cfg, child(name))
        else:
            truth = TwoSampleTruth(TwoSampleParams(beta0=s.beta0, beta1=s.beta1, sigma=s.sigma))
            estimate = pip_conditional_empirical(fit0, fit1, truth, n_t, child(name), tie_policy=cfg.tie_policy)
        by_name[EstimatorName(name)] = estimate

    records = [make_record(s.label, run, s.n, s.beta1, est, test.p_value, s.master_seed, name.value)
               for name, est in by_name.items()]
    return records, _decisions(s.beta1, test.p_value, by_name)


def run_two_sample_study(s: TwoSampleScenario, estimators: Iterable[EstimatorName],
                         cfg: Optional[ResamplingConfig] = None, n_mc: int = config.DEFAULT_N_MC,
                         n_t: int = config.DEFAULT_N_T,
                         processor: Optional[BatchProcessor] = None) -> StudyResult:
    """All runs of one scenario; identical output for any worker count."""
    cfg = cfg or ResamplingConfig()
    if cfg.stratify_by is None:
        cfg = cfg.model_copy(update={"stratify_by": GROUP})
    estimators = [EstimatorName(e) for e in estimators]
    processor = processor or BatchProcessor(max_workers=1, show_progress=False)

    logger.info(f"Two-sample scenario {s.label}: {s.runs} runs, estimators {[e.value for e in estimators]}")
    outcomes = processor.map_ordered(
        list(range(s.runs)),
        lambda run: run_two_sample_once(s, run, estimators, cfg, n_mc, n_t),
        f"Scenario {s.label}",
    )
    records = [record for run_records, _ in outcomes for record in run_records]
    table = tally(s.label, s.n, s.beta1, RULES, [decisions for _, decisions in outcomes])
    return StudyResult(table=table, records=records)
