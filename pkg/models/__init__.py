from models.fitters import FittedModel, Fitter, get_fitter, predict
from models.gbm import GBMFit, TreeNode, fit_gbm
from models.ols import INTERCEPT, OLSFit, fit_ols

__all__ = [
    "FittedModel", "Fitter", "get_fitter", "predict",
    "GBMFit", "TreeNode", "fit_gbm", "INTERCEPT", "OLSFit", "fit_ols",
]
