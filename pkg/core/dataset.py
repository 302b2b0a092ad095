"""
Dataset: outcome vector plus a named covariate matrix, the unit of all estimation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from utilities.error_handler import DataError, InvalidArgumentError


@dataclass(frozen=True, eq=False)
class Dataset:
    """Immutable sample: ``outcomes`` (n,), ``covariates`` (n, d), ``column_names`` (d)."""
    outcomes: np.ndarray
    covariates: np.ndarray
    column_names: Tuple[str, ...]

    def __post_init__(self):
        y = np.array(self.outcomes, dtype=np.float64).reshape(-1)
        x = np.array(self.covariates, dtype=np.float64)
        if x.ndim == 1 and len(self.column_names) == 1:
            x = x.reshape(-1, 1)
        elif x.size == 0 and len(self.column_names) == 0:
            x = x.reshape(y.shape[0], 0)
        names = tuple(str(c) for c in self.column_names)

        if x.ndim != 2 or x.shape[0] != y.shape[0] or x.shape[1] != len(names):
            raise DataError(
                f"covariates of shape {x.shape} do not match {y.shape[0]} outcomes and {len(names)} columns")
        if y.shape[0] < 2:
            raise DataError(f"a dataset needs at least 2 rows, got {y.shape[0]}")
        if not (np.isfinite(y).all() and np.isfinite(x).all()):
            raise DataError("dataset entries must all be finite")
        if any(not c.strip() for c in names):
            raise DataError("column names must be non-empty")
        if len(set(names)) != len(names):
            raise DataError(f"column names must be unique, got {list(names)}")

        y.setflags(write=False)
        x.setflags(write=False)
        object.__setattr__(self, "outcomes", y)
        object.__setattr__(self, "covariates", x)
        object.__setattr__(self, "column_names", names)
        object.__setattr__(self, "_index", {c: i for i, c in enumerate(names)})

    @property
    def n(self) -> int:
        return int(self.outcomes.shape[0])

    @property
    def d(self) -> int:
        return len(self.column_names)

    def column_indices(self, names: Iterable[str]) -> list:
        index: Dict[str, int] = self._index  # type: ignore[attr-defined]
        try:
            return [index[name] for name in names]
        except KeyError as e:
            raise InvalidArgumentError(f"unknown column {e.args[0]!r}; available: {list(self.column_names)}")

    def column(self, name: str) -> np.ndarray:
        return self.covariates[:, self.column_indices([name])[0]]

    def design(self, names: Sequence[str]) -> np.ndarray:
        """Covariate sub-matrix (n, len(names)) in the requested column order."""
        return self.covariates[:, self.column_indices(names)]

    def take(self, rows: Sequence[int]) -> "Dataset":
        rows = np.asarray(rows, dtype=np.intp)
        return Dataset(self.outcomes[rows], self.covariates[rows], self.column_names)

    def binary_groups(self, name: str) -> np.ndarray:
        """0/1 group column as integers; rejects any other coding."""
        values = self.column(name)
        if not np.isin(values, (0.0, 1.0)).all():
            raise DataError(f"column {name!r} must be a 0/1 dummy")
        return values.astype(np.int64)

    @classmethod
    def from_frame(cls, frame: pd.DataFrame, outcome: str,
                   covariates: Optional[Sequence[str]] = None) -> "Dataset":
        if outcome not in frame.columns:
            raise DataError(f"outcome column {outcome!r} not found; available: {list(frame.columns)}")
        names = list(covariates) if covariates is not None else [c for c in frame.columns if c != outcome]
        missing = [c for c in names if c not in frame.columns]
        if missing:
            raise DataError(f"covariate columns not found: {missing}")
        if outcome in names:
            raise DataError(f"outcome column {outcome!r} cannot also be a covariate")
        return cls(frame[outcome].to_numpy(dtype=np.float64),
                   frame[names].to_numpy(dtype=np.float64).reshape(len(frame), len(names)),
                   tuple(names))

    def to_frame(self, outcome: str = "y") -> pd.DataFrame:
        frame = pd.DataFrame(self.covariates, columns=list(self.column_names))
        frame.insert(0, outcome, self.outcomes)
        return frame
