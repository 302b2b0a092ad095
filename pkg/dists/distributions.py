"""
Distribution numerics: standard normal and Student-t CDFs/quantiles, bivariate normal
sampling and the scalar samplers used by the data generators.

CDFs come from scipy.special (ndtr, stdtr). Quantiles start from scipy's inverse and are
polished with Newton steps against the CDF so that cdf(quantile(p)) reproduces p to
machine precision.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Optional, Tuple, Union

import numpy as np
from scipy import special
from scipy.stats import t as student_t

import config
from core.rng import RngStream
from utilities.error_handler import DomainError, InvalidArgumentError, InvalidCovarianceError

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]

# conditional variances below this share of var2 are rounding residue of a rank-1 matrix
_RANK_ONE_FLOOR = 1e-12


def _output(values: np.ndarray, scalar: bool) -> ArrayLike:
    return float(values) if scalar else values


def _check_df(df: float) -> float:
    if not math.isfinite(df) or df < 1 or df != int(df):
        raise DomainError(f"degrees of freedom must be an integer >= 1, got {df!r}")
    return float(df)


def _check_open_probability(p: np.ndarray, name: str = "p") -> None:
    if np.isnan(p).any() or (p <= 0).any() or (p >= 1).any():
        raise DomainError(f"{name} must lie strictly between 0 and 1")


def std_normal_cdf(z: ArrayLike) -> ArrayLike:
    """P(Z <= z) for a standard normal Z."""
    arr = np.asarray(z, dtype=np.float64)
    if np.isnan(arr).any():
        raise InvalidArgumentError("std_normal_cdf needs non-NaN input")
    return _output(special.ndtr(arr), arr.ndim == 0)


def std_normal_pdf(z: ArrayLike) -> ArrayLike:
    arr = np.asarray(z, dtype=np.float64)
    return _output(np.exp(-0.5 * arr * arr) / math.sqrt(2.0 * math.pi), arr.ndim == 0)


def std_normal_quantile(p: ArrayLike) -> ArrayLike:
    """Inverse of std_normal_cdf on (0, 1)."""
    arr = np.asarray(p, dtype=np.float64)
    _check_open_probability(arr)
    z = special.ndtri(arr)
    # one Newton step in the tail that keeps the residual small
    lower = arr <= 0.5
    resid = np.where(lower, special.ndtr(z) - arr, special.ndtr(-z) - (1.0 - arr))
    density = np.exp(-0.5 * z * z) / math.sqrt(2.0 * math.pi)
    step = np.where(density > 0, resid / np.where(density > 0, density, 1.0), 0.0)
    z = np.where(lower, z - step, z + step)
    return _output(z, arr.ndim == 0)


def student_t_cdf(t: ArrayLike, df: float) -> ArrayLike:
    """P(T <= t) for Student's t with ``df`` degrees of freedom."""
    df = _check_df(df)
    arr = np.asarray(t, dtype=np.float64)
    if np.isnan(arr).any():
        raise InvalidArgumentError("student_t_cdf needs non-NaN input")
    return _output(special.stdtr(df, arr), arr.ndim == 0)


def student_t_quantile(p: ArrayLike, df: float) -> ArrayLike:
    """Inverse of student_t_cdf; Newton-polished in whichever tail ``p`` lies."""
    df = _check_df(df)
    arr = np.asarray(p, dtype=np.float64)
    _check_open_probability(arr)
    lower = arr <= 0.5
    tail = np.where(lower, arr, 1.0 - arr)
    # quantile of the lower tail, mirrored for the upper one
    q = special.stdtrit(df, tail)
    for _ in range(config.STUDENT_T_NEWTON_STEPS):
        density = student_t.pdf(q, df)
        ok = density > 0
        q = q - np.where(ok, (special.stdtr(df, q) - tail) / np.where(ok, density, 1.0), 0.0)
    q = np.where(lower, q, -q)
    return _output(q, arr.ndim == 0)


def student_t_upper_tail(t: ArrayLike, df: float) -> ArrayLike:
    """P(T > t) without the cancellation of 1 - cdf."""
    df = _check_df(df)
    arr = np.asarray(t, dtype=np.float64)
    return _output(special.stdtr(df, -arr), arr.ndim == 0)


@dataclass(frozen=True, eq=False)
class BivariateGaussian:
    """Two-dimensional normal law with a PSD covariance (checked within tolerance)."""
    mean: np.ndarray
    covariance: np.ndarray

    def __post_init__(self):
        mean = np.array(self.mean, dtype=np.float64).reshape(-1)
        cov = np.array(self.covariance, dtype=np.float64)
        if mean.shape != (2,) or cov.shape != (2, 2):
            raise InvalidArgumentError(f"expected a 2-vector and a 2x2 matrix, got {mean.shape} and {cov.shape}")
        if not (np.isfinite(mean).all() and np.isfinite(cov).all()):
            raise InvalidArgumentError("mean and covariance must be finite")
        scale = max(1.0, float(np.abs(cov).max()))
        if abs(cov[0, 1] - cov[1, 0]) > 1e-12 * scale:
            raise InvalidCovarianceError(f"covariance is not symmetric: {cov.tolist()}")
        check_covariance(cov[0, 0], cov[0, 1], cov[1, 1])
        mean.setflags(write=False)
        cov.setflags(write=False)
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "covariance", cov)


def min_eigenvalue(var1: ArrayLike, cov12: ArrayLike, var2: ArrayLike) -> np.ndarray:
    var1, cov12, var2 = (np.asarray(v, dtype=np.float64) for v in (var1, cov12, var2))
    half_trace = 0.5 * (var1 + var2)
    return half_trace - np.sqrt((0.5 * (var1 - var2)) ** 2 + cov12 ** 2)


def check_covariance(var1: ArrayLike, cov12: ArrayLike, var2: ArrayLike) -> None:
    """Raise InvalidCovarianceError when any [[var1, cov12], [cov12, var2]] is not PSD."""
    smallest = min_eigenvalue(var1, cov12, var2)
    if np.isnan(smallest).any() or (smallest < -config.COVARIANCE_TOLERANCE).any():
        worst = float(np.nanmin(smallest)) if not np.isnan(smallest).all() else float("nan")
        raise InvalidCovarianceError(f"covariance has eigenvalue {worst:.3e} below -{config.COVARIANCE_TOLERANCE:g}")


def bivariate_normal_transform(mean1: ArrayLike, mean2: ArrayLike, var1: ArrayLike, cov12: ArrayLike,
                               var2: ArrayLike, z1: np.ndarray, z2: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Map independent standard normals to (X1, X2) with the given moments.

    Uses the lower Cholesky factor written in conditional form,
    X2 = mean2 + (cov12 / var1)(X1 - mean1) + sqrt(var2 - cov12^2 / var1) Z2, with the
    conditional variance clipped at 0. Rank-1 covariances therefore give X2 as an exact
    affine function of X1 and a zero covariance returns the mean.
    """
    var1 = np.maximum(np.asarray(var1, dtype=np.float64), 0.0)
    var2 = np.maximum(np.asarray(var2, dtype=np.float64), 0.0)
    cov12 = np.asarray(cov12, dtype=np.float64)
    positive = var1 > 0
    safe_var1 = np.where(positive, var1, 1.0)
    slope = np.where(positive, cov12 / safe_var1, 0.0)
    cond_var = var2 - np.where(positive, cov12 * cov12 / safe_var1, 0.0)
    cond_var = np.where(cond_var <= _RANK_ONE_FLOOR * var2, 0.0, cond_var)
    x1 = mean1 + np.sqrt(var1) * z1
    x2 = mean2 + slope * (x1 - mean1) + np.sqrt(cond_var) * z2
    return x1, x2


def sample_bivariate_normal(dist: BivariateGaussian, rng: RngStream,
                            size: Optional[int] = None) -> np.ndarray:
    """One draw as a 2-vector, or ``size`` draws as a (size, 2) array."""
    gen = rng.generator
    count = 1 if size is None else int(size)
    z = gen.standard_normal((count, 2))
    cov = dist.covariance
    x1, x2 = bivariate_normal_transform(dist.mean[0], dist.mean[1], cov[0, 0], cov[0, 1], cov[1, 1],
                                        z[:, 0], z[:, 1])
    draws = np.column_stack([x1, x2])
    return draws[0] if size is None else draws


def sample_standard_normal(rng: RngStream, size: Optional[int] = None) -> ArrayLike:
    value = rng.generator.standard_normal(size)
    return float(value) if size is None else value


def sample_uniform(a: float, b: float, rng: RngStream, size: Optional[int] = None) -> ArrayLike:
    if not (math.isfinite(a) and math.isfinite(b)) or not a < b:
        raise DomainError(f"uniform sampling needs finite a < b, got [{a}, {b}]")
    value = rng.generator.uniform(a, b, size)
    return float(value) if size is None else value


def sample_bernoulli(p: float, rng: RngStream, size: Optional[int] = None) -> Union[int, np.ndarray]:
    if not (0.0 <= p <= 1.0):
        raise DomainError(f"Bernoulli probability must lie in [0, 1], got {p!r}")
    draws = (np.asarray(rng.generator.random(size)) < p).astype(np.int64)
    return int(draws) if size is None else draws
