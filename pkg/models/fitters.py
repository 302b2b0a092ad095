"""
Model-family registry: maps a family name to a fitter ``(data, covariates) -> fitted model``.
"""

from __future__ import annotations

from typing import Callable, Mapping, Optional, Protocol, Sequence, Tuple, Union

import numpy as np

from core.dataset import Dataset
from models.gbm import fit_gbm
from models.ols import fit_ols
from utilities.error_handler import InvalidArgumentError
from validation.data_models import GBMHyperparams, ModelFamily


class FittedModel(Protocol):
    covariate_names: Tuple[str, ...]

    def predict_matrix(self, covariates: np.ndarray) -> np.ndarray: ...

    def predict_dataset(self, data: Dataset) -> np.ndarray: ...

    def predict_row(self, row: Union[Sequence[float], Mapping[str, float]]) -> float: ...


Fitter = Callable[[Dataset, Sequence[str]], FittedModel]


def get_fitter(family: Union[ModelFamily, str], gbm: Optional[GBMHyperparams] = None) -> Fitter:
    try:
        family = ModelFamily(family)
    except ValueError:
        raise InvalidArgumentError(f"unknown model family {family!r}; choose from {[f.value for f in ModelFamily]}")
    if family == ModelFamily.OLS:
        return fit_ols
    hp = gbm or GBMHyperparams()

    def fit_boosted(data: Dataset, covariates: Sequence[str]) -> FittedModel:
        return fit_gbm(data, covariates, hp)

    return fit_boosted


def predict(fit: FittedModel, row: Union[Sequence[float], Mapping[str, float]]) -> float:
    """Prediction for one covariate row (sequence in fit order, or mapping by name)."""
    return fit.predict_row(row)
