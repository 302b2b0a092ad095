from dists.distributions import (
    BivariateGaussian,
    bivariate_normal_transform,
    check_covariance,
    sample_bernoulli,
    sample_bivariate_normal,
    sample_standard_normal,
    sample_uniform,
    std_normal_cdf,
    std_normal_pdf,
    std_normal_quantile,
    student_t_cdf,
    student_t_quantile,
    student_t_upper_tail,
)
from dists.quadrature import gauss_legendre

__all__ = [
    "BivariateGaussian", "bivariate_normal_transform", "check_covariance",
    "sample_bernoulli", "sample_bivariate_normal", "sample_standard_normal", "sample_uniform",
    "std_normal_cdf", "std_normal_pdf", "std_normal_quantile",
    "student_t_cdf", "student_t_quantile", "student_t_upper_tail", "gauss_legendre",
]
