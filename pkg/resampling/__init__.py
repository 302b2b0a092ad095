from resampling.estimators import (
    kfold_pip,
    loo_pip,
    nearest_rank_quantile,
    repeated_kfold_pip,
    split_sample_pip,
    summarize_repeats,
)
from resampling.folds import FoldPlan, make_folds, split_order

__all__ = [
    "FoldPlan", "make_folds", "split_order", "kfold_pip", "loo_pip", "nearest_rank_quantile",
    "repeated_kfold_pip", "split_sample_pip", "summarize_repeats",
]
