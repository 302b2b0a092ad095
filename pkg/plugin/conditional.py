"""
Empirical conditional PIP: both fitted models are frozen and compared on fresh draws from
a known data-generating law. Used as the oracle for estimators of the conditional PIP.
"""

from __future__ import annotations

import logging
from typing import Protocol

import numpy as np

from core.dataset import Dataset
from core.losses import SQUARED_ERROR, LossFunction, improvement_indicators
from core.rng import RngStream
from models.fitters import FittedModel
from plugin.monte_carlo import mc_mean
from validation.data_models import PipEstimate, TiePolicy

logger = logging.getLogger(__name__)


class DataGenerator(Protocol):
    """Anything that can draw ``n`` labelled rows from a known law."""

    def sample(self, n: int, rng: RngStream) -> Dataset: ...


def pip_conditional_empirical(fit0: FittedModel, fit1: FittedModel, truth: DataGenerator, n_t: int,
                              rng: RngStream, loss: LossFunction = SQUARED_ERROR,
                              tie_policy: TiePolicy = TiePolicy.STRICT,
                              processor=None) -> PipEstimate:
    def block(count: int, stream: RngStream) -> float:
        fresh = truth.sample(count, stream)
        loss_null = loss(fit0.predict_dataset(fresh), fresh.outcomes)
        loss_full = loss(fit1.predict_dataset(fresh), fresh.outcomes)
        return float(np.sum(improvement_indicators(loss_full, loss_null, tie_policy)))

    # datasets hold at least two rows, so no block may be smaller
    value = mc_mean(n_t, rng, block, processor, min_block=2, label="Conditional PIP")
    return PipEstimate(estimate=value, method="COND", seed=rng.master_seed, meta={"n_t": n_t})
