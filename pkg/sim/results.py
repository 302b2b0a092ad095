"""
Study results: per-run estimator records, decision tables, the tidy CSV and the rich
summary table.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Sequence

import pandas as pd
from rich.table import Table

import config
from utilities.error_handler import FileError, console
from validation.data_models import DecisionRow, DecisionTable, PipEstimate

logger = logging.getLogger(__name__)


def make_record(scenario: str, run: int, n: int, beta1: Optional[float], estimate: PipEstimate,
                p_value: Optional[float], seed: int, estimator: Optional[str] = None) -> Dict[str, Any]:
    return {
        "scenario": scenario,
        "run": run,
        "n": n,
        "beta1": beta1,
        "estimator": estimator or estimate.method,
        "estimate": estimate.estimate,
        "lower": estimate.lower_bound,
        "upper": estimate.upper_bound,
        "p_value": p_value,
        "delta_mse": estimate.meta.get("delta_mse"),
        "seed": seed,
    }


@dataclass
class StudyResult:
    table: DecisionTable
    records: List[Dict[str, Any]] = field(default_factory=list)

    def extend(self, other: "StudyResult") -> None:
        self.table = DecisionTable(rows=self.table.rows + other.table.rows)
        self.records.extend(other.records)


def tally(scenario: str, n: int, beta1: Optional[float], rules: Sequence[str],
          decisions: Sequence[Mapping[str, bool]]) -> DecisionTable:
    """Count correct decisions per rule over runs (rules missing from a run are skipped)."""
    rows = []
    for rule in rules:
        outcomes = [d[rule] for d in decisions if rule in d]
        if outcomes:
            rows.append(DecisionRow(scenario=scenario, n=n, beta1=beta1, rule=rule,
                                    correct=sum(outcomes), runs=len(outcomes)))
    return DecisionTable(rows=rows)


def records_frame(records: Sequence[Mapping[str, Any]]) -> pd.DataFrame:
    frame = pd.DataFrame(list(records), columns=config.RECORD_COLUMNS)
    for column in ("estimate", "lower", "upper", "p_value", "delta_mse"):
        frame[column] = pd.to_numeric(frame[column]).round(config.FLOAT_DECIMALS)
    return frame


def emit_results(records: Sequence[Mapping[str, Any]], path: Path) -> Path:
    """Write the tidy CSV (fixed column order; header only for no records)."""
    path = Path(path)
    try:
        records_frame(records).to_csv(path, index=False, float_format=f"%.{config.FLOAT_DECIMALS}f",
                                      lineterminator="\n")
    except OSError as e:
        raise FileError(f"cannot write results to {path}: {e}")
    logger.info(f"Wrote {len(records)} records to {path}")
    return path


def write_decision_table(table: DecisionTable, path: Path) -> Path:
    path = Path(path)
    try:
        path.write_text(json.dumps(table.to_records(), indent=2) + "\n")
    except OSError as e:
        raise FileError(f"cannot write decision table to {path}: {e}")
    return path


def display_decision_table(table: DecisionTable, title: str = "Correct decisions (%)") -> None:
    """Summary on stderr: one row per scenario, one column per rule."""
    rules: List[str] = []
    for row in table.rows:
        if row.rule not in rules:
            rules.append(row.rule)

    summary = Table(title=title, header_style=config.STYLE_HEADER)
    summary.add_column("Scenario", style="cyan")
    summary.add_column("n", justify="right")
    summary.add_column("beta1", justify="right")
    for rule in rules:
        summary.add_column(rule, justify="right", style=config.STYLE_SUCCESS)

    scenarios: Dict[str, Dict[str, DecisionRow]] = {}
    for row in table.rows:
        scenarios.setdefault(row.scenario, {})[row.rule] = row
    for scenario, by_rule in scenarios.items():
        first = next(iter(by_rule.values()))
        beta = "" if first.beta1 is None else f"{first.beta1:g}"
        cells = [f"{by_rule[r].rate:.2f}" if r in by_rule else "" for r in rules]
        summary.add_row(scenario, str(first.n), beta, *cells)
    console.print(summary)
