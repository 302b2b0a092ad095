"""
Two-sample significance tests: pooled-variance t-test through the OLS fit, t-tests for
any OLS coefficient, and the pooled two-proportion z-test.
"""

from __future__ import annotations

import logging
import math

import config
from core.dataset import Dataset
from dists.distributions import std_normal_cdf, student_t_upper_tail
from models.ols import OLSFit, fit_ols
from utilities.error_handler import DataError, DomainError, InsufficientDataError
from validation.data_models import TwoSampleTestResult

logger = logging.getLogger(__name__)


def coefficient_t_test(fit: OLSFit, name: str) -> TwoSampleTestResult:
    """Two-sided t-test of ``coefficient == 0`` with n - p degrees of freedom."""
    estimate = fit.coefficient(name)
    se = fit.standard_error(name)
    if se > 0:
        t_stat = estimate / se
    else:
        t_stat = 0.0 if estimate == 0 else math.copysign(math.inf, estimate)
    p_value = min(1.0, 2.0 * student_t_upper_tail(abs(t_stat), fit.df_resid))
    return TwoSampleTestResult(t_statistic=t_stat, df=fit.df_resid, p_value=p_value,
                               beta1_hat=estimate, se_beta1=se)


def pvalue_two_sample(data: Dataset, group: str = config.TWO_SAMPLE_GROUP_COLUMN) -> TwoSampleTestResult:
    """Pooled-variance two-sample t-test as the slope test of ``y ~ 1 + group``.

    Unbalanced groups use the usual pooled statistic; for n/2 rows per group the
    statistic reduces to sqrt(n) |beta1_hat| / (2 sigma_hat).
    """
    groups = data.binary_groups(group)
    n1 = int(groups.sum())
    if n1 == 0 or n1 == data.n:
        raise DataError(f"both groups of {group!r} must be non-empty")
    if data.n < 3:
        raise InsufficientDataError(f"the t-test needs at least 3 rows, got {data.n}")
    return coefficient_t_test(fit_ols(data, [group]), group)


def pvalue_two_proportion(x1: int, n1: int, x2: int, n2: int) -> float:
    """Two-sided pooled z-test for p1 = p2, without continuity correction."""
    for label, value in (("x1", x1), ("n1", n1), ("x2", x2), ("n2", n2)):
        if int(value) != value:
            raise DomainError(f"{label} must be an integer count, got {value!r}")
    if n1 < 1 or n2 < 1 or not (0 <= x1 <= n1) or not (0 <= x2 <= n2):
        raise DomainError(f"counts must satisfy 0 <= x <= n with n >= 1, got ({x1}/{n1}, {x2}/{n2})")
    pooled = (x1 + x2) / (n1 + n2)
    if pooled in (0.0, 1.0):
        return 1.0
    z = (x1 / n1 - x2 / n2) / math.sqrt(pooled * (1.0 - pooled) * (1.0 / n1 + 1.0 / n2))
    return min(1.0, 2.0 * std_normal_cdf(-abs(z)))
