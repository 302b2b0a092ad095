#!/usr/bin/env python3
"""
Replication runner: rebuild two-group data sets from published summary statistics and
report the p-value together with the repeated 5-fold CV PIP and its quantile bounds.

Gaussian studies are moment matched (each group z-scored, then rescaled to the target mean
and SD with ddof 1), built from normal scores rescaled the same way (no randomness, so only
the CV streams depend on the seed), or found by searching generator streams until the t-test
p-value lands within ``p_tolerance`` of the published one. Binomial studies use exact
0/1 counts round(n * p) and score ties with half credit.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

import config
from core.dataset import Dataset
from core.losses import SQUARED_ERROR
from core.rng import RngStream
from dists.distributions import std_normal_quantile
from models.ols import fit_ols
from relations.pvalues import pvalue_two_proportion, pvalue_two_sample
from resampling.estimators import repeated_kfold_pip
from sim.generators import GROUP
from utilities.batch_processor import BatchProcessor
from utilities.error_handler import EstimationFailedError
from validation.data_models import (
    GenerationMode,
    OutcomeKind,
    PipEstimate,
    ReplicationStudySpec,
    ResamplingConfig,
    TiePolicy,
)

logger = logging.getLogger(__name__)

DATA_STREAM = 0
PIP_STREAM = 1


@dataclass(frozen=True)
class ReplicationResult:
    study_name: str
    outcome_kind: OutcomeKind
    generation: GenerationMode
    p_value: float
    pip: PipEstimate
    attempts: int = 1

    def to_record(self, decimals: int = config.FLOAT_DECIMALS) -> Dict[str, Any]:
        return {
            "study": self.study_name,
            "outcome_kind": self.outcome_kind.value,
            "generation": self.generation.value,
            "p_value": round(self.p_value, decimals),
            "pip": round(self.pip.estimate, decimals),
            "lower": round(self.pip.lower_bound, decimals),
            "upper": round(self.pip.upper_bound, decimals),
            "seed": self.pip.seed,
            "attempts": self.attempts,
        }


def _two_group_dataset(y1: np.ndarray, y2: np.ndarray) -> Dataset:
    y = np.concatenate([y1, y2])
    x = np.concatenate([np.zeros(y1.shape[0]), np.ones(y2.shape[0])])
    return Dataset(y, x.reshape(-1, 1), (GROUP,))


def _rescaled(z: np.ndarray, mean: float, sd: float) -> np.ndarray:
    return mean + sd * (z - z.mean()) / z.std(ddof=1)


def moment_matched(n: int, mean: float, sd: float, rng: RngStream) -> np.ndarray:
    """Normal sample rescaled so its mean and SD (ddof 1) equal the targets exactly."""
    return _rescaled(rng.generator.standard_normal(n), mean, sd)


def normal_scores(n: int, mean: float, sd: float) -> np.ndarray:
    """Blom scores Phi^-1((i - 3/8) / (n + 1/4)), i = 1..n, rescaled like ``moment_matched``."""
    positions = (np.arange(1, n + 1) - 0.375) / (n + 0.25)
    return _rescaled(np.asarray(std_normal_quantile(positions), dtype=np.float64), mean, sd)


def gaussian_data(spec: ReplicationStudySpec, rng: RngStream) -> Tuple[Dataset, int]:
    """Data set for a Gaussian study and the number of generator attempts used."""
    if spec.generation == GenerationMode.MOMENT_MATCHED:
        y1 = moment_matched(spec.n1, spec.mean1, spec.sd1, rng.child(0))
        y2 = moment_matched(spec.n2, spec.mean2, spec.sd2, rng.child(1))
        return _two_group_dataset(y1, y2), 1
    if spec.generation == GenerationMode.NORMAL_SCORES:
        y1 = normal_scores(spec.n1, spec.mean1, spec.sd1)
        y2 = normal_scores(spec.n2, spec.mean2, spec.sd2)
        return _two_group_dataset(y1, y2), 1

    for attempt in range(spec.max_attempts):
        gen = rng.child(attempt).generator
        y1 = spec.mean1 + spec.sd1 * gen.standard_normal(spec.n1)
        y2 = spec.mean2 + spec.sd2 * gen.standard_normal(spec.n2)
        data = _two_group_dataset(y1, y2)
        if abs(pvalue_two_sample(data).p_value - spec.target_p_value) <= spec.p_tolerance:
            logger.info(f"{spec.study_name}: stream {attempt} matches p={spec.target_p_value}")
            return data, attempt + 1
    raise EstimationFailedError(
        f"no generator stream within {spec.p_tolerance} of p={spec.target_p_value} "
        f"after {spec.max_attempts} attempts", context={"study": spec.study_name})


def binomial_data(spec: ReplicationStudySpec) -> Tuple[Dataset, Tuple[int, int]]:
    x1 = int(round(spec.n1 * spec.p1))
    x2 = int(round(spec.n2 * spec.p2))
    y1 = np.r_[np.ones(x1), np.zeros(spec.n1 - x1)]
    y2 = np.r_[np.ones(x2), np.zeros(spec.n2 - x2)]
    return _two_group_dataset(y1, y2), (x1, x2)


def replicate_study(spec: ReplicationStudySpec, cfg: ResamplingConfig, rng: RngStream) -> ReplicationResult:
    cfg = cfg.model_copy(update={"stratify_by": cfg.stratify_by or GROUP})
    attempts = 1
    if spec.outcome_kind == OutcomeKind.GAUSSIAN:
        data, attempts = gaussian_data(spec, rng.child(DATA_STREAM))
        p_value = pvalue_two_sample(data).p_value
    else:
        data, (x1, x2) = binomial_data(spec)
        p_value = pvalue_two_proportion(x1, spec.n1, x2, spec.n2)
        cfg = cfg.model_copy(update={"tie_policy": TiePolicy.HALF_CREDIT})

    pip = repeated_kfold_pip(data, [], [GROUP], fit_ols, SQUARED_ERROR, cfg, rng.child(PIP_STREAM))
    logger.info(f"{spec.study_name}: p={p_value:.4f}, PIP={pip.estimate:.4f} "
                f"[{pip.lower_bound:.4f}, {pip.upper_bound:.4f}]")
    return ReplicationResult(spec.study_name, spec.outcome_kind, spec.generation, p_value, pip, attempts)


def run_replication(studies: Sequence[ReplicationStudySpec], cfg: Optional[ResamplingConfig] = None,
                    master_seed: int = config.DEFAULT_SEED,
                    processor: Optional[BatchProcessor] = None) -> List[ReplicationResult]:
    """Study i runs on stream (master_seed, i)."""
    cfg = cfg or ResamplingConfig()
    processor = processor or BatchProcessor(max_workers=1, show_progress=False)
    indexed = list(enumerate(studies))
    return processor.map_ordered(
        indexed, lambda item: replicate_study(item[1], cfg, RngStream(master_seed, item[0])), "Replication")
