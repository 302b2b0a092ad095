"""
Nonparametric PIP estimators: split-sample, k-fold, leave-one-out and repeated k-fold CV.

The k-fold estimate is (1/k) * sum over folds of the fold's mean improvement indicator,
which differs from pooling all rows when fold sizes are unequal. Every estimate also
reports the cross-validated difference MSE(full) - MSE(null) in ``meta["delta_mse"]``,
averaged with the same weighting. Fit failures are raised, never skipped.
"""

from __future__ import annotations

import logging
import math
from typing import List, Optional, Sequence, Tuple

import numpy as np

from core.dataset import Dataset
from core.losses import LossFunction, improvement_indicators
from core.rng import RngStream
from models.fitters import Fitter
from resampling.folds import make_folds, split_order
from utilities.error_handler import DomainError, EstimationFailedError, PipError
from validation.data_models import PipEstimate, ResamplingConfig, TiePolicy

logger = logging.getLogger(__name__)


def nearest_rank_quantile(values: Sequence[float], q: float) -> float:
    """Nearest-rank quantile: the ceil(q * M)-th smallest value (rank at least 1)."""
    ordered = sorted(values)
    if not ordered:
        raise DomainError("quantile of an empty sample")
    if not 0 < q < 1:
        raise DomainError(f"quantile level must lie in (0, 1), got {q}")
    rank = max(1, math.ceil(q * len(ordered) - 1e-9))
    return float(ordered[min(rank, len(ordered)) - 1])


def _strata(data: Dataset, stratify_by: Optional[str]) -> Optional[np.ndarray]:
    return None if stratify_by is None else data.column(stratify_by)


def _evaluate(data: Dataset, train_rows: np.ndarray, test_rows: np.ndarray,
              null_spec: Sequence[str], full_spec: Sequence[str], fitter: Fitter,
              loss: LossFunction, tie_policy: TiePolicy, where: dict) -> Tuple[float, float]:
    """Fit both models on the training rows; (mean indicator, delta MSE) on the test rows."""
    try:
        train = data.take(train_rows)
        fit_null = fitter(train, null_spec)
        fit_full = fitter(train, full_spec)
        y_test = data.outcomes[test_rows]
        loss_null = loss(fit_null.predict_matrix(data.design(null_spec)[test_rows]), y_test)
        loss_full = loss(fit_full.predict_matrix(data.design(full_spec)[test_rows]), y_test)
    except (PipError, np.linalg.LinAlgError, ValueError) as e:
        location = ", ".join(f"{key} {value}" for key, value in where.items())
        raise EstimationFailedError(f"model fit failed ({location})", context=where, cause=e) from e
    indicators = improvement_indicators(loss_full, loss_null, tie_policy)
    return float(indicators.mean()), float(np.mean(loss_full - loss_null))


def split_sample_pip(data: Dataset, null_spec: Sequence[str], full_spec: Sequence[str], fitter: Fitter,
                     loss: LossFunction, cfg: ResamplingConfig, rng: RngStream) -> PipEstimate:
    n_train = int(math.floor(data.n * cfg.split_ratio))
    n_test = data.n - n_train
    if n_train < 1 or n_test < 1:
        raise DomainError(f"split ratio {cfg.split_ratio} leaves an empty part of {data.n} rows")
    order = split_order(data.n, rng, _strata(data, cfg.stratify_by))
    estimate, delta = _evaluate(data, order[:n_train], order[n_train:], null_spec, full_spec,
                                fitter, loss, cfg.tie_policy, {"split": 0})
    return PipEstimate(estimate=estimate, method="SS", seed=rng.master_seed,
                       meta={"n_train": n_train, "n_test": n_test, "delta_mse": delta})


def _kfold_once(data: Dataset, null_spec: Sequence[str], full_spec: Sequence[str], fitter: Fitter,
                loss: LossFunction, k: int, tie_policy: TiePolicy, rng: RngStream,
                stratify_by: Optional[str] = None, repeat: Optional[int] = None) -> Tuple[float, float]:
    plan = make_folds(data.n, k, rng, _strata(data, stratify_by))
    fold_pips: List[float] = []
    fold_deltas: List[float] = []
    for fold in range(k):
        where = {"fold": fold} if repeat is None else {"repeat": repeat, "fold": fold}
        pip, delta = _evaluate(data, plan.train_rows(fold), plan.test_rows(fold), null_spec, full_spec,
                               fitter, loss, tie_policy, where)
        fold_pips.append(pip)
        fold_deltas.append(delta)
    return math.fsum(fold_pips) / k, math.fsum(fold_deltas) / k


def _cv_tag(k: int) -> str:
    return f"CV{k}"


def kfold_pip(data: Dataset, null_spec: Sequence[str], full_spec: Sequence[str], fitter: Fitter,
              loss: LossFunction, k: int, tie_policy: TiePolicy, rng: RngStream,
              stratify_by: Optional[str] = None) -> PipEstimate:
    estimate, delta = _kfold_once(data, null_spec, full_spec, fitter, loss, k, tie_policy, rng, stratify_by)
    return PipEstimate(estimate=estimate, method=_cv_tag(k), seed=rng.master_seed,
                       meta={"k": k, "delta_mse": delta})


def loo_pip(data: Dataset, null_spec: Sequence[str], full_spec: Sequence[str], fitter: Fitter,
            loss: LossFunction, tie_policy: TiePolicy, rng: RngStream) -> PipEstimate:
    estimate, delta = _kfold_once(data, null_spec, full_spec, fitter, loss, data.n, tie_policy, rng)
    return PipEstimate(estimate=estimate, method="LOO", seed=rng.master_seed,
                       meta={"k": data.n, "delta_mse": delta})


def summarize_repeats(values: Sequence[float], alpha: float) -> Tuple[float, float, float]:
    """(mean, lower, upper) of repeat estimates; bounds are nearest-rank alpha / 1-alpha quantiles.

    A bound is widened to the mean only when its nearest rank falls strictly inside the sorted
    repeats (lower rank above 1 or upper rank below M). With M = 10 and alpha = 0.05 the ranks
    are 1 and 10, so the bounds are the minimum and maximum and never move.
    """
    values = [float(v) for v in values]
    if min(values) == max(values):
        return values[0], values[0], values[0]
    mean = math.fsum(values) / len(values)
    lower = min(nearest_rank_quantile(values, alpha), mean)
    upper = max(nearest_rank_quantile(values, 1.0 - alpha), mean)
    return mean, lower, upper


def repeated_kfold_pip(data: Dataset, null_spec: Sequence[str], full_spec: Sequence[str], fitter: Fitter,
                       loss: LossFunction, cfg: ResamplingConfig, rng: RngStream,
                       processor=None) -> PipEstimate:
    """Mean of ``cfg.repeats`` k-fold estimates; repeat r uses ``rng.child(r)``."""
    def one_repeat(r: int) -> Tuple[float, float]:
        return _kfold_once(data, null_spec, full_spec, fitter, loss, cfg.k, cfg.tie_policy,
                           rng.child(r), cfg.stratify_by, repeat=r)

    repeats = list(range(cfg.repeats))
    if processor is not None and cfg.repeats > 1:
        outcomes = processor.map_ordered(repeats, one_repeat, f"rep{_cv_tag(cfg.k)}")
    else:
        outcomes = [one_repeat(r) for r in repeats]

    estimate, lower, upper = summarize_repeats([pip for pip, _ in outcomes], cfg.alpha)
    delta = math.fsum(d for _, d in outcomes) / cfg.repeats
    logger.debug(f"rep{_cv_tag(cfg.k)} on {data.n} rows: {estimate:.6f} [{lower:.6f}, {upper:.6f}]")
    return PipEstimate(estimate=estimate, lower_bound=lower, upper_bound=upper,
                       method=f"rep{_cv_tag(cfg.k)}", seed=rng.master_seed,
                       meta={"k": cfg.k, "repeats": cfg.repeats, "delta_mse": delta})
