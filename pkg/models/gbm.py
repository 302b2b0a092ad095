"""
Minimal least-squares gradient boosting with depth-limited regression trees.

Stagewise: start at the training mean, fit a tree to the current residuals by greedy
exact SSE-reduction splits, add shrinkage x tree. Every round uses all rows. Split
candidates are midpoints between consecutive distinct sorted values; a split needs at
least ``min_obs_per_node`` rows on each side and a positive gain. Ties go to the lowest
column, then to the smallest threshold. A round without any admissible split emits a
no-op tree (a single leaf with value 0).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from core.dataset import Dataset
from utilities.error_handler import InsufficientDataError, InvalidArgumentError
from validation.data_models import GBMHyperparams

logger = logging.getLogger(__name__)

_RELATIVE_GAIN_FLOOR = 1e-12


@dataclass(frozen=True)
class TreeNode:
    value: float = 0.0
    column: int = -1
    threshold: float = 0.0
    left: Optional["TreeNode"] = None
    right: Optional["TreeNode"] = None
    n_obs: int = 0

    @property
    def is_leaf(self) -> bool:
        return self.left is None

    def depth(self) -> int:
        if self.is_leaf:
            return 0
        return 1 + max(self.left.depth(), self.right.depth())

    def leaves(self) -> List["TreeNode"]:
        if self.is_leaf:
            return [self]
        return self.left.leaves() + self.right.leaves()

    def predict(self, x: np.ndarray) -> np.ndarray:
        if self.is_leaf:
            return np.full(x.shape[0], self.value)
        out = np.empty(x.shape[0])
        go_left = x[:, self.column] <= self.threshold
        out[go_left] = self.left.predict(x[go_left])
        out[~go_left] = self.right.predict(x[~go_left])
        return out


NO_OP_TREE = TreeNode(value=0.0)


@dataclass(frozen=True, eq=False)
class GBMFit:
    trees: Tuple[TreeNode, ...]
    shrinkage: float
    initial_prediction: float
    covariate_names: Tuple[str, ...]
    hyperparams: GBMHyperparams
    train_mse_path: Tuple[float, ...] = field(default=())

    def predict_matrix(self, covariates: np.ndarray) -> np.ndarray:
        x = np.asarray(covariates, dtype=np.float64)
        if x.ndim != 2 or x.shape[1] != len(self.covariate_names):
            raise InvalidArgumentError(
                f"expected {len(self.covariate_names)} covariate columns, got shape {x.shape}")
        out = np.full(x.shape[0], self.initial_prediction)
        for tree in self.trees:
            if not tree.is_leaf or tree.value != 0.0:
                out += self.shrinkage * tree.predict(x)
        return out

    def predict_dataset(self, data: Dataset) -> np.ndarray:
        return self.predict_matrix(data.design(self.covariate_names))

    def predict_row(self, row: Union[Sequence[float], Mapping[str, float]]) -> float:
        if isinstance(row, Mapping):
            missing = [c for c in self.covariate_names if c not in row]
            if missing:
                raise InvalidArgumentError(f"row is missing covariates {missing}")
            values = [row[c] for c in self.covariate_names]
        else:
            values = list(np.asarray(row, dtype=np.float64).reshape(-1))
        return float(self.predict_matrix(np.asarray(values, dtype=np.float64).reshape(1, -1))[0])


def _best_split(x: np.ndarray, residuals: np.ndarray, in_node: np.ndarray,
                presorted: np.ndarray, min_obs: int) -> Optional[Tuple[int, float]]:
    """(column, threshold) of the largest SSE reduction within the node, or None."""
    node_r = residuals[in_node]
    m = node_r.shape[0]
    if m < 2 * min_obs:
        return None
    total = node_r.sum()
    base = total * total / m
    node_sse = float(node_r @ node_r - base)
    counts_left = np.arange(1, m)
    counts_ok = (counts_left >= min_obs) & (m - counts_left >= min_obs)

    best: Optional[Tuple[int, float]] = None
    best_gain = 0.0
    for j in range(x.shape[1]):
        order = presorted[:, j][in_node[presorted[:, j]]]
        xs = x[order, j]
        valid = counts_ok & (xs[1:] > xs[:-1])
        if not valid.any():
            continue
        left_sum = np.cumsum(residuals[order])[:-1]
        gain = left_sum ** 2 / counts_left + (total - left_sum) ** 2 / (m - counts_left) - base
        gain = np.where(valid, gain, -np.inf)
        i = int(np.argmax(gain))
        if gain[i] > best_gain and gain[i] > _RELATIVE_GAIN_FLOOR * node_sse:
            best_gain = float(gain[i])
            best = (j, 0.5 * (xs[i] + xs[i + 1]))
    return best


def _grow(x: np.ndarray, residuals: np.ndarray, in_node: np.ndarray, presorted: np.ndarray,
          depth_left: int, min_obs: int) -> TreeNode:
    n_obs = int(in_node.sum())
    split = _best_split(x, residuals, in_node, presorted, min_obs) if depth_left > 0 else None
    if split is None:
        return TreeNode(value=float(residuals[in_node].mean()), n_obs=n_obs)
    column, threshold = split
    goes_left = x[:, column] <= threshold
    left = _grow(x, residuals, in_node & goes_left, presorted, depth_left - 1, min_obs)
    right = _grow(x, residuals, in_node & ~goes_left, presorted, depth_left - 1, min_obs)
    return TreeNode(column=column, threshold=float(threshold), left=left, right=right, n_obs=n_obs)


def fit_gbm(data: Dataset, covariate_subset: Sequence[str],
            hp: Optional[GBMHyperparams] = None) -> GBMFit:
    hp = hp or GBMHyperparams()
    names = tuple(covariate_subset)
    if data.n < 2 * hp.min_obs_per_node:
        raise InsufficientDataError(
            f"boosting with min_obs_per_node={hp.min_obs_per_node} needs at least "
            f"{2 * hp.min_obs_per_node} rows, got {data.n}")

    x = data.design(names)
    y = data.outcomes
    initial = float(y.mean())
    fitted = np.full(data.n, initial)
    presorted = np.argsort(x, axis=0, kind="stable")
    all_rows = np.ones(data.n, dtype=bool)

    trees: List[TreeNode] = []
    mse_path: List[float] = []
    for _ in range(hp.n_trees):
        residuals = y - fitted
        if x.shape[1] == 0:
            tree = NO_OP_TREE
        else:
            tree = _grow(x, residuals, all_rows, presorted, hp.interaction_depth, hp.min_obs_per_node)
            if tree.is_leaf:
                tree = NO_OP_TREE
        if tree is not NO_OP_TREE:
            fitted = fitted + hp.shrinkage * tree.predict(x)
        trees.append(tree)
        mse_path.append(float(np.mean((y - fitted) ** 2)))

    logger.debug(f"GBM on {data.n} rows, covariates {list(names)}: final train MSE {mse_path[-1]:.6g}")
    return GBMFit(tuple(trees), hp.shrinkage, initial, names, hp, tuple(mse_path))
