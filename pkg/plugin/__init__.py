from plugin.conditional import DataGenerator, pip_conditional_empirical
from plugin.monte_carlo import mc_block_sizes, mc_mean
from plugin.two_sample import (
    pip_c1,
    pip_c1_standard_error,
    pip_c2,
    pip_expected_from_fit,
    pip_expected_two_sample_mc,
    pip_theoretical_two_sample,
)
from plugin.uniform import (
    moments_from_fit,
    pip_expected_uniform_mc,
    pip_plugin_uniform,
    pip_theoretical_uniform,
)

__all__ = [
    "DataGenerator", "pip_conditional_empirical", "mc_block_sizes", "mc_mean",
    "pip_c1", "pip_c1_standard_error", "pip_c2", "pip_expected_from_fit",
    "pip_expected_two_sample_mc", "pip_theoretical_two_sample",
    "moments_from_fit", "pip_expected_uniform_mc", "pip_plugin_uniform", "pip_theoretical_uniform",
]
