"""
Ordinary least squares with an intercept, solved by QR.

Residual variance uses the divisor n - p; the coefficient covariance is
sigma_hat^2 (X'X)^-1 computed as sigma_hat^2 R^-1 R^-T from the QR factor.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Mapping, Sequence, Tuple, Union

import numpy as np
from scipy.linalg import solve_triangular

import config
from core.dataset import Dataset
from utilities.error_handler import InsufficientDataError, InvalidArgumentError, SingularDesignError

logger = logging.getLogger(__name__)

INTERCEPT = "(intercept)"


@dataclass(frozen=True, eq=False)
class OLSFit:
    coefficients: np.ndarray          # (p,), intercept first
    residual_variance: float
    coef_covariance: np.ndarray       # (p, p)
    n: int
    covariate_names: Tuple[str, ...]
    covariate_means: np.ndarray       # training means of the covariates, (p - 1,)

    @property
    def p(self) -> int:
        return int(self.coefficients.shape[0])

    @property
    def df_resid(self) -> int:
        return self.n - self.p

    @property
    def sigma(self) -> float:
        return float(np.sqrt(self.residual_variance))

    @property
    def intercept(self) -> float:
        return float(self.coefficients[0])

    def _position(self, name: str) -> int:
        if name == INTERCEPT:
            return 0
        try:
            return 1 + self.covariate_names.index(name)
        except ValueError:
            raise InvalidArgumentError(f"fit has no coefficient {name!r}; covariates: {list(self.covariate_names)}")

    def coefficient(self, name: str) -> float:
        return float(self.coefficients[self._position(name)])

    def standard_error(self, name: str) -> float:
        i = self._position(name)
        return float(np.sqrt(max(self.coef_covariance[i, i], 0.0)))

    def predict_matrix(self, covariates: np.ndarray) -> np.ndarray:
        x = np.asarray(covariates, dtype=np.float64)
        if x.ndim != 2 or x.shape[1] != self.p - 1:
            raise InvalidArgumentError(f"expected {self.p - 1} covariate columns, got shape {x.shape}")
        return self.coefficients[0] + x @ self.coefficients[1:]

    def predict_dataset(self, data: Dataset) -> np.ndarray:
        return self.predict_matrix(data.design(self.covariate_names))

    def predict_row(self, row: Union[Sequence[float], Mapping[str, float]]) -> float:
        if isinstance(row, Mapping):
            missing = [c for c in self.covariate_names if c not in row]
            if missing:
                raise InvalidArgumentError(f"row is missing covariates {missing}")
            values = [row[c] for c in self.covariate_names]
        else:
            values = list(np.asarray(row, dtype=np.float64).reshape(-1))
        return float(self.predict_matrix(np.asarray(values, dtype=np.float64).reshape(1, -1))[0])


def fit_ols(data: Dataset, covariate_subset: Sequence[str] = ()) -> OLSFit:
    """Least-squares fit of ``outcomes ~ 1 + covariate_subset``."""
    names = tuple(covariate_subset)
    if len(set(names)) != len(names):
        raise InvalidArgumentError(f"covariate subset has duplicates: {list(names)}")
    x = data.design(names)
    y = data.outcomes
    n, p = data.n, len(names) + 1
    if n <= p:
        raise InsufficientDataError(f"OLS with {p} coefficients needs more than {p} rows, got {n}")

    design = np.column_stack([np.ones(n), x])
    q, r = np.linalg.qr(design, mode="reduced")
    diag = np.abs(np.diag(r))
    if (diag <= config.RANK_TOLERANCE * diag.max()).any():
        raise SingularDesignError(f"design with covariates {list(names)} is rank deficient")

    beta = solve_triangular(r, q.T @ y, lower=False)
    residuals = y - design @ beta
    rss = float(residuals @ residuals)
    sigma2 = rss / (n - p)
    r_inv = solve_triangular(r, np.eye(p), lower=False)
    cov = sigma2 * (r_inv @ r_inv.T)
    cov = 0.5 * (cov + cov.T)

    fit = OLSFit(beta, sigma2, cov, n, names, x.mean(axis=0) if p > 1 else np.zeros(0))
    logger.debug(f"OLS fit on {n} rows, covariates {list(names)}: beta={np.round(beta, 6).tolist()}")
    return fit
