"""
Data generators for the simulation studies, plus "truth" objects that draw fresh labelled
rows for the empirical conditional PIP oracle.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

import config
from core.dataset import Dataset
from core.rng import RngStream
from dists.distributions import sample_bernoulli, sample_standard_normal, sample_uniform
from utilities.error_handler import DomainError, InvalidArgumentError
from validation.data_models import NonlinearScenario, TwoSampleParams, TwoSampleScenario, UniformCovariateParams

GROUP = config.TWO_SAMPLE_GROUP_COLUMN
NONLINEAR_COLUMNS = tuple(config.NONLINEAR_FULL_COVARIATES)


def balanced_two_sample(n: int, beta0: float, beta1: float, sigma: float, rng: RngStream) -> Dataset:
    """n/2 rows with x = 0 followed by n/2 rows with x = 1; y = beta0 + beta1 x + N(0, sigma^2)."""
    if n < 2 or n % 2:
        raise InvalidArgumentError(f"the balanced design needs an even n >= 2, got {n}")
    if not sigma > 0:
        raise DomainError(f"sigma must be positive, got {sigma!r}")
    x = np.repeat([0.0, 1.0], n // 2)
    y = beta0 + beta1 * x + sigma * sample_standard_normal(rng, n)
    return Dataset(y, x.reshape(-1, 1), (GROUP,))


def gen_two_sample(s: TwoSampleScenario, rng: RngStream) -> Dataset:
    return balanced_two_sample(s.n, s.beta0, s.beta1, s.sigma, rng)


def gen_linear_uniform(n: int, beta0: float, beta1: float, sigma: float, a: float, b: float,
                       rng: RngStream, column: str = "x") -> Dataset:
    if not sigma > 0:
        raise DomainError(f"sigma must be positive, got {sigma!r}")
    x = sample_uniform(a, b, rng, n)
    y = beta0 + beta1 * x + sigma * sample_standard_normal(rng, n)
    return Dataset(y, x.reshape(-1, 1), (column,))


def nonlinear_rows(n: int, noise_sd: float, rng: RngStream) -> Dataset:
    """y = |4 x1|^(3 x4) + 5 x2 + (2 x3)^x5 + N(0, noise_sd^2) with rounded covariates."""
    if not noise_sd > 0:
        raise DomainError(f"noise_sd must be positive, got {noise_sd!r}")
    x1 = np.rint(sample_uniform(0.0, 6.0, rng, n))
    x2 = np.rint(sample_standard_normal(rng, n))
    x3 = sample_bernoulli(0.5, rng, n).astype(np.float64)
    x4 = np.round(sample_uniform(0.0, 1.0, rng, n), 1)
    x5 = np.round(sample_uniform(1.0, 2.0, rng, n), 1)
    signal = np.abs(4.0 * x1) ** (3.0 * x4) + 5.0 * x2 + (2.0 * x3) ** x5
    y = signal + noise_sd * sample_standard_normal(rng, n)
    return Dataset(y, np.column_stack([x1, x2, x3, x4, x5]), NONLINEAR_COLUMNS)


def gen_nonlinear(s: NonlinearScenario, rng: RngStream) -> Dataset:
    return nonlinear_rows(s.n, s.noise_sd, rng)


@dataclass(frozen=True)
class TwoSampleTruth:
    """Fresh two-sample rows: x ~ Bernoulli(0.5), y | x ~ N(beta0 + beta1 x, sigma^2)."""
    params: TwoSampleParams

    def sample(self, n: int, rng: RngStream) -> Dataset:
        x = sample_bernoulli(0.5, rng, n).astype(np.float64)
        y = self.params.beta0 + self.params.beta1 * x + self.params.sigma * sample_standard_normal(rng, n)
        return Dataset(y, x.reshape(-1, 1), (GROUP,))


@dataclass(frozen=True)
class LinearUniformTruth:
    params: UniformCovariateParams
    column: str = "x"

    def sample(self, n: int, rng: RngStream) -> Dataset:
        p = self.params
        return gen_linear_uniform(n, p.beta0, p.beta1, p.sigma, p.a, p.b, rng, self.column)


@dataclass(frozen=True)
class NonlinearTruth:
    noise_sd: float = config.NONLINEAR_NOISE_SD

    def sample(self, n: int, rng: RngStream) -> Dataset:
        return nonlinear_rows(n, self.noise_sd, rng)
