"""
PIP for simple linear regression with a uniform covariate X* ~ U[a, b].

Theoretical and plug-in values integrate Phi(|beta1| |x* - K| / (2 sigma)) against the
uniform density, split at the kink K (the covariate mean), with Gauss-Legendre nodes on
each piece. The expected PIP is a Monte-Carlo average over x* of the bivariate normal law
of the prediction errors (E1, E0) given the coefficient sampling moments.
"""

from __future__ import annotations

import logging
import math
from typing import Optional

import numpy as np

import config
from core.losses import improvement_indicators
from core.rng import RngStream
from dists.distributions import bivariate_normal_transform, check_covariance, std_normal_cdf
from dists.quadrature import gauss_legendre
from models.ols import OLSFit
from plugin.monte_carlo import mc_mean
from utilities.error_handler import DomainError, InvalidArgumentError
from validation.data_models import OLSMoments, PipEstimate, TiePolicy, UniformCovariateParams

logger = logging.getLogger(__name__)


def _kinked_average(slope: float, sigma: float, kink: float, a: float, b: float, quad_points: int) -> float:
    if slope == 0:
        return 0.5
    scale = abs(slope) / (2.0 * sigma)
    center = kink
    kink = min(max(kink, a), b)

    def integrand(x: np.ndarray) -> np.ndarray:
        return std_normal_cdf(scale * np.abs(x - center))

    total = gauss_legendre(integrand, a, kink, quad_points) + gauss_legendre(integrand, kink, b, quad_points)
    return total / (b - a)


def pip_theoretical_uniform(params: UniformCovariateParams,
                            quad_points: int = config.QUAD_POINTS) -> PipEstimate:
    kink = 0.5 * (params.a + params.b)
    value = _kinked_average(params.beta1, params.sigma, kink, params.a, params.b, quad_points)
    return PipEstimate(estimate=value, method="theoretical_uniform", meta={"quad_points": quad_points})


def pip_plugin_uniform(fit: OLSFit, a: float, b: float, covariate: Optional[str] = None,
                       quad_points: int = config.QUAD_POINTS,
                       x_bar: Optional[float] = None) -> PipEstimate:
    """Plug-in theoretical/conditional PIP from a simple-regression fit on [a, b]."""
    if not (math.isfinite(a) and math.isfinite(b)) or not a < b:
        raise DomainError(f"interval requires finite a < b, got [{a}, {b}]")
    if fit.p != 2:
        raise InvalidArgumentError(f"expected a simple regression fit, got {fit.p} coefficients")
    name = covariate or fit.covariate_names[0]
    if fit.residual_variance <= 0:
        raise DomainError("the full fit has zero residual variance")
    kink = float(fit.covariate_means[0]) if x_bar is None else float(x_bar)
    value = _kinked_average(fit.coefficient(name), fit.sigma, kink, a, b, quad_points)
    return PipEstimate(estimate=value, method="plugin_uniform", meta={"quad_points": quad_points})


def moments_from_fit(fit: OLSFit, sigma: Optional[float] = None) -> OLSMoments:
    """Coefficient sampling moments of a simple-regression fit."""
    if fit.p != 2:
        raise InvalidArgumentError(f"expected a simple regression fit, got {fit.p} coefficients")
    cov = fit.coef_covariance
    return OLSMoments(sigma=fit.sigma if sigma is None else sigma,
                      var_b0=float(cov[0, 0]), var_b1=float(cov[1, 1]), cov_b01=float(cov[0, 1]),
                      x_bar=float(fit.covariate_means[0]))


def error_moments(beta1: float, moments: OLSMoments, x_star: np.ndarray):
    """Means and covariance entries of (E1, E0) at the covariate values ``x_star``."""
    s2 = moments.sigma ** 2
    v0, v1, c = moments.var_b0, moments.var_b1, moments.cov_b01
    xb = moments.x_bar
    mean_e0 = beta1 * (xb - x_star)
    var_e1 = s2 + v0 + x_star ** 2 * v1 + 2.0 * x_star * c
    cov_e = s2 + v0 + x_star * c + xb * c + xb * x_star * v1
    var_e0 = np.full_like(x_star, s2 + v0 + xb ** 2 * v1 + 2.0 * xb * c)
    return mean_e0, var_e1, cov_e, var_e0


def pip_expected_uniform_mc(params: UniformCovariateParams, moments: OLSMoments, n_mc: int,
                            rng: RngStream, tie_policy: TiePolicy = TiePolicy.STRICT,
                            processor=None) -> PipEstimate:
    if n_mc < 1:
        raise DomainError(f"n_mc must be positive, got {n_mc}")
    # PSD at both interval ends and the mean covers the quadratic-in-x* covariance
    corners = np.array([params.a, params.b, moments.x_bar, 0.5 * (params.a + params.b)])
    _, v1, c12, v0 = error_moments(params.beta1, moments, corners)
    check_covariance(v1, c12, v0)

    def block(count: int, stream: RngStream) -> float:
        gen = stream.generator
        x_star = gen.uniform(params.a, params.b, count)
        z = gen.standard_normal((count, 2))
        mean_e0, var_e1, cov_e, var_e0 = error_moments(params.beta1, moments, x_star)
        check_covariance(var_e1, cov_e, var_e0)
        e1, e0 = bivariate_normal_transform(0.0, mean_e0, var_e1, cov_e, var_e0, z[:, 0], z[:, 1])
        return float(improvement_indicators(e1 * e1, e0 * e0, tie_policy).sum())

    value = mc_mean(n_mc, rng, block, processor, label="Expected PIP (uniform)")
    return PipEstimate(estimate=value, method="Exp_uniform", seed=rng.master_seed, meta={"n_mc": n_mc})

