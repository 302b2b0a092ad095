#!/usr/bin/env python3
"""
Data Validation Manager
Turns CSV files into validated Datasets and JSON files into validated configuration
models, translating every failure into the toolkit's exception hierarchy.
"""

import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Type, TypeVar

import pandas as pd
from pydantic import BaseModel, ValidationError
from rich.table import Table

import config
from core.dataset import Dataset
from utilities.error_handler import ConfigError, DataError, FileError, PipError, console
from validation.data_models import ReplicationConfig, SimulationConfig

logger = logging.getLogger(__name__)

ModelT = TypeVar("ModelT", bound=BaseModel)


def _format_validation_error(error: ValidationError) -> str:
    parts = []
    for item in error.errors():
        location = ".".join(str(p) for p in item.get("loc", ())) or "<root>"
        parts.append(f"{location}: {item.get('msg')}")
    return "; ".join(parts)


@dataclass(frozen=True)
class InputCheck:
    """Outcome of loading one input file."""
    kind: str
    path: str
    error: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.error is None


class DataValidator:
    """Loads input files and keeps a log of which ones were accepted."""

    def __init__(self):
        self.outcomes: List[InputCheck] = []

    def load_csv(self, file_path: str, outcome: str, covariates: Optional[Sequence[str]] = None) -> Dataset:
        """Read a numeric CSV (header row, '.' decimals) into a Dataset; missing cells are rejected."""
        path = Path(file_path)
        try:
            if not path.is_file():
                raise FileError(f"data file not found: {path}")
            try:
                frame = pd.read_csv(path, sep=",", decimal=".", thousands=None, skipinitialspace=True)
            except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as e:
                raise DataError(f"cannot parse {path}: {e}")

            names = list(covariates) if covariates is not None else None
            used = [outcome] + (names if names is not None else [c for c in frame.columns if c != outcome])
            missing_columns = [c for c in used if c not in frame.columns]
            if missing_columns:
                raise DataError(f"columns not found in {path.name}: {missing_columns}")

            subset = frame[used]
            if subset.isna().any().any():
                rows = subset.index[subset.isna().any(axis=1)].tolist()
                raise DataError(f"missing cells in {path.name} at data rows {[r + 1 for r in rows[:5]]}")
            non_numeric = [c for c in used if not pd.api.types.is_numeric_dtype(subset[c])]
            if non_numeric:
                raise DataError(f"non-numeric values in columns {non_numeric} of {path.name}")

            data = Dataset.from_frame(subset, outcome, names)
        except PipError as e:
            self._failed("csv", path, e)
            raise

        self._passed("csv", path)
        logger.info(f"Loaded {data.n} rows x {data.d} covariates from {path}")
        return data

    def load_model(self, file_path: str, model_class: Type[ModelT]) -> ModelT:
        """Parse a JSON file through a pydantic model."""
        path = Path(file_path)
        try:
            if not path.is_file():
                raise FileError(f"configuration file not found: {path}")
            try:
                raw = json.loads(path.read_text())
            except (json.JSONDecodeError, UnicodeDecodeError) as e:
                raise ConfigError(f"{path.name} is not valid JSON: {e}")
            if not isinstance(raw, dict):
                raise ConfigError(f"{path.name} must contain a JSON object")
            try:
                model = model_class.model_validate(raw)
            except ValidationError as e:
                raise ConfigError(f"invalid {model_class.__name__} in {path.name}: {_format_validation_error(e)}")
        except PipError as e:
            self._failed(model_class.__name__, path, e)
            raise

        self._passed(model_class.__name__, path)
        logger.info(f"Validated {model_class.__name__} from {path}")
        return model

    def load_simulation_config(self, file_path: str) -> SimulationConfig:
        return self.load_model(file_path, SimulationConfig)

    def load_replication_config(self, file_path: str) -> ReplicationConfig:
        return self.load_model(file_path, ReplicationConfig)

    def _passed(self, kind: str, path: Path) -> None:
        self.outcomes.append(InputCheck(kind, str(path)))

    def _failed(self, kind: str, path: Path, error: PipError) -> None:
        logger.debug(f"{kind} input {path} rejected: {error}")
        self.outcomes.append(InputCheck(kind, str(path), f"{type(error).__name__}: {error}"))

    def get_validation_summary(self) -> Dict[str, Any]:
        failed = [check for check in self.outcomes if not check.ok]
        return {
            'checked': len(self.outcomes),
            'passed': len(self.outcomes) - len(failed),
            'failed': len(failed),
            'failures': [{'kind': c.kind, 'path': c.path, 'error': c.error} for c in failed],
        }

    def display_validation_summary(self) -> None:
        table = Table(title="Inputs", header_style=config.STYLE_HEADER)
        table.add_column("Kind", style="cyan")
        table.add_column("Path")
        table.add_column("Status")
        for check in self.outcomes:
            if check.ok:
                table.add_row(check.kind, check.path, "ok", style=config.STYLE_SUCCESS)
            else:
                table.add_row(check.kind, check.path, check.error, style=config.STYLE_ERROR)
        console.print(table)

    def reset_validation_stats(self) -> None:
        self.outcomes.clear()


# Global data validator instance
data_validator = DataValidator()
