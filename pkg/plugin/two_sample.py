"""
Plug-in PIP estimators for the two-sample setting.

Models: m0 = intercept only, m1 = intercept + beta1 * x with a 0/1 group dummy x.
- C1: Phi(|beta1_hat| / (4 sigma_hat)), normal errors.
- C2: same conditional PIP with the group-wise empirical CDFs (strict "<").
- Exp: Monte-Carlo over the bivariate normal mixture of the prediction errors (E1, E0).
A zero effect estimate returns exactly 0.5 in C1/C2 and in the theoretical PIP.
"""

from __future__ import annotations

import logging
import math
from typing import Optional

import numpy as np

import config
from core.dataset import Dataset
from core.losses import improvement_indicators
from core.rng import RngStream
from dists.distributions import (
    bivariate_normal_transform,
    check_covariance,
    std_normal_cdf,
    std_normal_pdf,
)
from models.ols import OLSFit, fit_ols
from plugin.monte_carlo import mc_mean
from utilities.error_handler import DataError, DomainError, InvalidArgumentError, handle_exceptions
from validation.data_models import PipEstimate, TiePolicy, TwoSampleParams

logger = logging.getLogger(__name__)


def _check_sigma(sigma: float, name: str = "sigma") -> None:
    if not math.isfinite(sigma) or sigma <= 0:
        raise DomainError(f"{name} must be a positive finite number, got {sigma!r}")


def _c1_value(beta1: float, sigma: float) -> float:
    if not math.isfinite(beta1):
        raise InvalidArgumentError(f"effect must be finite, got {beta1!r}")
    _check_sigma(sigma)
    if beta1 == 0:
        return 0.5
    return std_normal_cdf(abs(beta1) / (4.0 * sigma))


def pip_c1(beta1_hat: float, sigma_hat: float) -> PipEstimate:
    return PipEstimate(estimate=_c1_value(beta1_hat, sigma_hat), method="C1")


def pip_c1_standard_error(beta1_hat: float, sigma_hat: float, se_beta1: float) -> float:
    """Delta-method standard error of C1: phi(|b|/(4s)) * se(b) / (4s)."""
    _check_sigma(sigma_hat, "sigma_hat")
    if not math.isfinite(se_beta1) or se_beta1 < 0:
        raise DomainError(f"se_beta1 must be nonnegative, got {se_beta1!r}")
    return std_normal_pdf(abs(beta1_hat) / (4.0 * sigma_hat)) * se_beta1 / (4.0 * sigma_hat)


def pip_theoretical_two_sample(params: TwoSampleParams) -> PipEstimate:
    return PipEstimate(estimate=_c1_value(params.beta1, params.sigma), method="theoretical")


def _strict_ecdf(values: np.ndarray, at: float) -> float:
    return float(np.count_nonzero(values < at)) / values.shape[0]


@handle_exceptions
def pip_c2(data: Dataset, fit0: OLSFit, fit1: OLSFit,
           group: str = config.TWO_SAMPLE_GROUP_COLUMN) -> PipEstimate:
    groups = data.binary_groups(group)
    y0 = data.outcomes[groups == 0]
    y1 = data.outcomes[groups == 1]
    if y0.size == 0 or y1.size == 0:
        raise DataError(f"both groups of {group!r} must be non-empty")
    if fit0.p != 1:
        raise InvalidArgumentError("C2 needs an intercept-only null fit")

    b00 = fit0.intercept
    b01 = fit1.intercept
    b11 = fit1.coefficient(group)
    if b11 == 0:
        return PipEstimate(estimate=0.5, method="C2")

    mid0 = 0.5 * (b00 + b01)
    mid1 = 0.5 * (b00 + b01 + b11)
    if b11 > 0:
        value = 0.5 * (1.0 - _strict_ecdf(y1, mid1)) + 0.5 * _strict_ecdf(y0, mid0)
    else:
        value = 0.5 * (1.0 - _strict_ecdf(y0, mid0)) + 0.5 * _strict_ecdf(y1, mid1)
    return PipEstimate(estimate=value, method="C2")


def mixture_covariance(sigma: float, n: int) -> np.ndarray:
    """Covariance of (E1, E0) within each mixture component."""
    return sigma ** 2 * np.array([[1.0 + 2.0 / n, 1.0 + 1.0 / n],
                                  [1.0 + 1.0 / n, 1.0 + 1.0 / n]])


def pip_expected_two_sample_mc(beta1: float, sigma: float, n: int, n_mc: int, rng: RngStream,
                               tie_policy: TiePolicy = TiePolicy.STRICT,
                               processor=None) -> PipEstimate:
    """Expected PIP from the two-component normal mixture of the prediction errors."""
    if not math.isfinite(beta1):
        raise InvalidArgumentError(f"effect must be finite, got {beta1!r}")
    _check_sigma(sigma)
    if n < 4 or n % 2:
        raise InvalidArgumentError(f"the balanced design needs an even n >= 4, got {n}")
    if n_mc < 1:
        raise DomainError(f"n_mc must be positive, got {n_mc}")

    cov = mixture_covariance(sigma, n)
    check_covariance(cov[0, 0], cov[0, 1], cov[1, 1])
    half_effect = 0.5 * beta1

    def block(count: int, stream: RngStream) -> float:
        gen = stream.generator
        sign = np.where(gen.random(count) < 0.5, -1.0, 1.0)
        z = gen.standard_normal((count, 2))
        e1, e0 = bivariate_normal_transform(0.0, sign * half_effect, cov[0, 0], cov[0, 1], cov[1, 1],
                                            z[:, 0], z[:, 1])
        return float(improvement_indicators(e1 * e1, e0 * e0, tie_policy).sum())

    value = mc_mean(n_mc, rng, block, processor, label="Expected PIP")
    logger.debug(f"Exp PIP beta1={beta1} sigma={sigma} n={n}: {value:.6f}")
    return PipEstimate(estimate=value, method="Exp", seed=rng.master_seed, meta={"n_mc": n_mc})


@handle_exceptions
def pip_expected_from_fit(data: Dataset, n_mc: int, rng: RngStream,
                          group: str = config.TWO_SAMPLE_GROUP_COLUMN,
                          fit1: Optional[OLSFit] = None,
                          tie_policy: TiePolicy = TiePolicy.STRICT,
                          processor=None) -> PipEstimate:
    """Plug-in expected PIP: beta1_hat and sigma_hat of the full fit in the mixture."""
    groups = data.binary_groups(group)
    if 2 * int(groups.sum()) != data.n:
        raise DataError(f"the expected PIP needs a balanced design in {group!r}")
    fit1 = fit1 or fit_ols(data, [group])
    if fit1.residual_variance <= 0:
        raise DomainError("the full fit has zero residual variance")
    return pip_expected_two_sample_mc(fit1.coefficient(group), fit1.sigma, data.n, n_mc, rng,
                                      tie_policy, processor)
