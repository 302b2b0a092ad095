"""
Loss functions and the improvement indicator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from utilities.error_handler import InvalidArgumentError
from validation.data_models import LossKind, TiePolicy


def _tie_value(policy: TiePolicy) -> float:
    return 0.5 if TiePolicy(policy) == TiePolicy.HALF_CREDIT else 0.0


def squared_loss(prediction: float, observed: float) -> float:
    if not (math.isfinite(prediction) and math.isfinite(observed)):
        raise InvalidArgumentError(f"squared_loss needs finite inputs, got ({prediction}, {observed})")
    residual = prediction - observed
    return residual * residual


def squared_losses(predictions: np.ndarray, observed: np.ndarray) -> np.ndarray:
    """Elementwise squared loss over aligned arrays."""
    predictions = np.asarray(predictions, dtype=np.float64)
    observed = np.asarray(observed, dtype=np.float64)
    if predictions.shape != observed.shape:
        raise InvalidArgumentError(f"shape mismatch: {predictions.shape} vs {observed.shape}")
    if not (np.isfinite(predictions).all() and np.isfinite(observed).all()):
        raise InvalidArgumentError("squared_losses needs finite inputs")
    return (predictions - observed) ** 2


def improvement_indicator(loss_full: float, loss_null: float,
                          policy: TiePolicy = TiePolicy.STRICT) -> float:
    """1 when the full model's loss is strictly smaller, 0 when larger, tie per policy."""
    if not (math.isfinite(loss_full) and math.isfinite(loss_null)):
        raise InvalidArgumentError(f"losses must be finite, got ({loss_full}, {loss_null})")
    if loss_full < loss_null:
        return 1.0
    if loss_full > loss_null:
        return 0.0
    return _tie_value(policy)


def improvement_indicators(loss_full: np.ndarray, loss_null: np.ndarray,
                           policy: TiePolicy = TiePolicy.STRICT) -> np.ndarray:
    loss_full = np.asarray(loss_full, dtype=np.float64)
    loss_null = np.asarray(loss_null, dtype=np.float64)
    if loss_full.shape != loss_null.shape:
        raise InvalidArgumentError(f"shape mismatch: {loss_full.shape} vs {loss_null.shape}")
    if not (np.isfinite(loss_full).all() and np.isfinite(loss_null).all()):
        raise InvalidArgumentError("losses must be finite")
    out = np.where(loss_full < loss_null, 1.0, 0.0)
    out[loss_full == loss_null] = _tie_value(policy)
    return out


@dataclass(frozen=True)
class LossFunction:
    """Named loss ``(prediction, observed) -> nonnegative``, vectorized over arrays."""
    kind: LossKind
    evaluation: Callable[[np.ndarray, np.ndarray], np.ndarray]

    def __call__(self, predictions, observed) -> np.ndarray:
        values = np.asarray(self.evaluation(np.asarray(predictions, dtype=np.float64),
                                            np.asarray(observed, dtype=np.float64)),
                            dtype=np.float64)
        if not np.isfinite(values).all() or (values < 0).any():
            raise InvalidArgumentError(f"{self.kind.value} loss produced negative or non-finite values")
        return values

    @classmethod
    def custom(cls, evaluation: Callable[[np.ndarray, np.ndarray], np.ndarray]) -> "LossFunction":
        return cls(LossKind.CUSTOM, evaluation)


SQUARED_ERROR = LossFunction(LossKind.SQUARED_ERROR, squared_losses)
