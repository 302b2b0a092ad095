from core.dataset import Dataset
from core.losses import (
    SQUARED_ERROR,
    LossFunction,
    improvement_indicator,
    improvement_indicators,
    squared_loss,
    squared_losses,
)
from core.rng import RngStream
from validation.data_models import LossKind, PipEstimate, TiePolicy

__all__ = [
    "Dataset", "RngStream", "LossFunction", "LossKind", "TiePolicy", "PipEstimate",
    "SQUARED_ERROR", "squared_loss", "squared_losses",
    "improvement_indicator", "improvement_indicators",
]
