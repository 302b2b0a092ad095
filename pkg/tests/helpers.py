from pathlib import Path

import numpy as np

from core.dataset import Dataset


def make_two_group(y0, y1, group: str = "x") -> Dataset:
    y = np.concatenate([np.asarray(y0, dtype=float), np.asarray(y1, dtype=float)])
    x = np.repeat([0.0, 1.0], [len(y0), len(y1)])
    return Dataset(y, x.reshape(-1, 1), (group,))


def write_text(path: Path, text: str) -> Path:
    path.write_text(text)
    return path


def ols_kfold_reference(y: np.ndarray, x: np.ndarray, assignments: np.ndarray, k: int) -> float:
    """k-fold PIP of y ~ 1 + x against y ~ 1, refit per fold with lstsq."""
    fold_pips = []
    for fold in range(k):
        test = assignments == fold
        train = ~test
        null_pred = y[train].mean()
        design = np.column_stack([np.ones(train.sum()), x[train]])
        coef, *_ = np.linalg.lstsq(design, y[train], rcond=None)
        full_pred = coef[0] + coef[1] * x[test]
        improved = (full_pred - y[test]) ** 2 < (null_pred - y[test]) ** 2
        fold_pips.append(improved.mean())
    return float(np.mean(fold_pips))
