from relations.mappings import (
    asymptotic_scaled_log_p,
    delta_mse_from_pip,
    overlap_from_pip,
    pip_from_pvalue,
    pvalue_from_pip,
)
from relations.pvalues import coefficient_t_test, pvalue_two_proportion, pvalue_two_sample

__all__ = [
    "asymptotic_scaled_log_p", "delta_mse_from_pip", "overlap_from_pip", "pip_from_pvalue",
    "pvalue_from_pip", "coefficient_t_test", "pvalue_two_proportion", "pvalue_two_sample",
]
