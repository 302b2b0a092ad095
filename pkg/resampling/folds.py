"""
Fold plans and split orders for the resampling estimators.

Both start from one uniform permutation of the row indices. With strata, fold dealing
walks the strata in order of first appearance in the permutation, and split orders
interleave strata by within-stratum rank, so relabelling the strata never changes a plan.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from core.rng import RngStream
from utilities.error_handler import DomainError


@dataclass(frozen=True, eq=False)
class FoldPlan:
    assignments: np.ndarray  # fold index per row
    k: int

    @property
    def n(self) -> int:
        return int(self.assignments.shape[0])

    def test_rows(self, fold: int) -> np.ndarray:
        return np.flatnonzero(self.assignments == fold)

    def train_rows(self, fold: int) -> np.ndarray:
        return np.flatnonzero(self.assignments != fold)

    def fold_sizes(self) -> np.ndarray:
        return np.bincount(self.assignments, minlength=self.k)


def _strata_codes(strata: np.ndarray) -> np.ndarray:
    _, codes = np.unique(np.asarray(strata), return_inverse=True)
    return codes.reshape(-1)


def _grouped_order(perm: np.ndarray, strata: np.ndarray) -> np.ndarray:
    codes = _strata_codes(strata)[perm]
    _, first_seen = np.unique(codes, return_index=True)
    rank_of_code = np.empty_like(first_seen)
    rank_of_code[np.argsort(first_seen)] = np.arange(first_seen.shape[0])
    return perm[np.argsort(rank_of_code[codes], kind="stable")]


def _interleaved_order(perm: np.ndarray, strata: np.ndarray) -> np.ndarray:
    codes = _strata_codes(strata)[perm]
    counts = np.bincount(codes)
    within_rank = np.empty(perm.shape[0], dtype=np.float64)
    seen = np.zeros_like(counts)
    for position, code in enumerate(codes):
        within_rank[position] = (seen[code] + 0.5) / counts[code]
        seen[code] += 1
    return perm[np.argsort(within_rank, kind="stable")]


def make_folds(n: int, k: int, rng: RngStream, strata: Optional[np.ndarray] = None) -> FoldPlan:
    """Deal a random permutation round-robin into ``k`` folds."""
    if not 2 <= k <= n:
        raise DomainError(f"fold count must satisfy 2 <= k <= n, got k={k}, n={n}")
    perm = rng.generator.permutation(n)
    if strata is not None:
        if len(strata) != n:
            raise DomainError(f"strata has {len(strata)} entries for {n} rows")
        perm = _grouped_order(perm, strata)
    assignments = np.empty(n, dtype=np.int64)
    assignments[perm] = np.arange(n) % k
    return FoldPlan(assignments, k)


def split_order(n: int, rng: RngStream, strata: Optional[np.ndarray] = None) -> np.ndarray:
    """Row order whose prefix is the training part of a split-sample estimate."""
    perm = rng.generator.permutation(n)
    if strata is None:
        return perm
    if len(strata) != n:
        raise DomainError(f"strata has {len(strata)} entries for {n} rows")
    return _interleaved_order(perm, strata)
