"""
Mappings between the two-sample PIP (C1) and the p-value, the asymptotic scaled log
p-value, the MSE difference and the overlap of the two predictive normal densities.
"""

from __future__ import annotations

import math

from dists.distributions import std_normal_cdf, std_normal_quantile, student_t_quantile, student_t_upper_tail
from utilities.error_handler import DomainError


def _check_n(n: int, minimum: int) -> None:
    if int(n) != n or n < minimum:
        raise DomainError(f"sample size must be an integer >= {minimum}, got {n!r}")


def _check_pip(pip: float, low: float = 0.0, allow_low: bool = False) -> None:
    ok = (low <= pip if allow_low else low < pip) and pip < 1.0
    if not (math.isfinite(pip) and ok):
        bracket = "[" if allow_low else "("
        raise DomainError(f"PIP must lie in {bracket}{low}, 1), got {pip!r}")


def pip_from_pvalue(p: float, n: int) -> float:
    """Phi(F_t^-1(1 - p/2; n - 2) / (2 sqrt(n)))."""
    _check_n(n, 3)
    if not (math.isfinite(p) and 0.0 < p <= 1.0):
        raise DomainError(f"p-value must lie in (0, 1], got {p!r}")
    # upper quantile taken as the mirrored lower one
    quantile = 0.0 if p == 1.0 else -student_t_quantile(0.5 * p, n - 2)
    return std_normal_cdf(quantile / (2.0 * math.sqrt(n)))


def pvalue_from_pip(pip: float, n: int) -> float:
    """Inverse of pip_from_pvalue on [0.5, 1)."""
    _check_n(n, 3)
    _check_pip(pip, 0.5, allow_low=True)
    if pip == 0.5:
        return 1.0
    t_stat = 2.0 * math.sqrt(n) * std_normal_quantile(pip)
    return min(1.0, 2.0 * student_t_upper_tail(t_stat, n - 2))


def asymptotic_scaled_log_p(pip: float) -> float:
    """Limit of log(p) / n: -0.5 ln(1 + 4 Phi^-1(pip)^2)."""
    _check_pip(pip)
    z = std_normal_quantile(pip)
    return -0.5 * math.log1p(4.0 * z * z)


def delta_mse_from_pip(pip: float, sigma: float) -> float:
    """MSE(full) - MSE(null) = -4 sigma^2 Phi^-1(pip)^2."""
    if not (math.isfinite(sigma) and sigma > 0):
        raise DomainError(f"sigma must be positive, got {sigma!r}")
    _check_pip(pip)
    z = std_normal_quantile(pip)
    return -4.0 * sigma * sigma * z * z


def overlap_from_pip(pip: float, n: int) -> float:
    """Overlap of the two groups' predictive normal densities: 2 Phi(-2 z / sqrt(1 + 2/n))."""
    _check_n(n, 1)
    _check_pip(pip, 0.5, allow_low=True)
    z = 0.0 if pip == 0.5 else std_normal_quantile(pip)
    return 2.0 * std_normal_cdf(-2.0 * z / math.sqrt(1.0 + 2.0 / n))
