"""
Rendering of training outputs as text: CSV tables, DOT files and the report.
"""
from typing import Optional, Sequence

import pandas as pd
from pydantic import BaseModel, ConfigDict

from src.core.utils import format_number
from src.evaluate.metrics import Histogram
from src.resample.runner import TreeRecord


class EnsembleRow(BaseModel):
    """One line of the ensemble summary table."""

    model_config = ConfigDict(frozen=True)

    name: str
    selector: str
    n_trees: int
    balanced_accuracy: Optional[float] = None
    threshold: Optional[float] = None


def _num(value: Optional[float]) -> str:
    return "" if value is None else format_number(value)


def _flag(value: bool) -> str:
    return "true" if value else "false"


def _csv(columns: list[str], rows: list[list[str]]) -> str:
    return pd.DataFrame(rows, columns=columns, dtype=object).to_csv(index=False, lineterminator="\n")


def records_csv(records: Sequence[TreeRecord]) -> str:
    columns = [
        "rep",
        "balanced_accuracy",
        "interpretable",
        "n_nodes",
        "n_leaves",
        "n_violations",
        "first_split",
        "small_accuracy",
        "large_fit_accuracy",
        "large_holdout_accuracy",
    ]
    rows = [
        [
            str(r.rep_index),
            format_number(r.balanced_accuracy),
            _flag(r.interpretable),
            str(r.n_nodes),
            str(r.n_leaves),
            str(r.violations),
            r.first_split or "",
            _num(r.small_accuracy),
            _num(r.large_fit_accuracy),
            _num(r.large_holdout_accuracy),
        ]
        for r in records
    ]
    return _csv(columns, rows)


def ensembles_csv(rows: Sequence[EnsembleRow]) -> str:
    return _csv(
        ["selector", "n_trees", "balanced_accuracy", "rule"],
        [[r.name, str(r.n_trees), _num(r.balanced_accuracy), r.selector] for r in rows],
    )


def histogram_csv(hist: Histogram) -> str:
    return _csv(
        ["bin_low", "bin_high", "count"],
        [[format_number(b.low), format_number(b.high), str(b.count)] for b in hist.bins],
    )


def histogram_stats_csv(hist: Histogram) -> str:
    """Single-row summary (min, max, median) written next to histogram.csv."""
    return _csv(["min", "max", "median"], [[format_number(hist.min), format_number(hist.max), format_number(hist.median)]])


def predictions_csv(labels: Sequence[str]) -> str:
    return _csv(["row", "predicted_class"], [[str(i), str(label)] for i, label in enumerate(labels)])


def report_text(
    *,
    data: str,
    n_rows: int,
    labels: tuple[str, str],
    counts: tuple[int, int],
    fraction: float,
    train_large: int,
    hist: Histogram,
    records: Sequence[TreeRecord],
    best: Optional[TreeRecord],
    ensembles: Sequence[EnsembleRow],
) -> str:
    uninterpretable = sum(not r.interpretable for r in records)
    lines = [
        "PrInDT training report",
        f"data: {data} ({n_rows} rows)",
        f"small class: {labels[0]} ({counts[0]} rows)",
        f"large class: {labels[1]} ({counts[1]} rows)",
        f"repetitions: {len(records)}",
        f"training rows per repetition: {counts[0]} + {train_large} = {counts[0] + train_large} "
        f"(fraction {format_number(fraction)}, hold-out {counts[1] - train_large})",
        f"balanced accuracy: min={format_number(hist.min)} max={format_number(hist.max)} "
        f"median={format_number(hist.median)}",
        f"uninterpretable trees: {uninterpretable} of {len(records)}",
    ]
    if best is not None:
        lines.append(
            f"best interpretable tree: rep {best.rep_index}, balanced accuracy {format_number(best.balanced_accuracy)}"
        )
    else:
        lines.append("best interpretable tree: none")
    lines.append("ensembles:")
    for row in ensembles:
        acc = "n/a" if row.balanced_accuracy is None else format_number(row.balanced_accuracy)
        lines.append(f"  {row.name}) {row.selector}: {row.n_trees} trees, balanced accuracy {acc}")
    return "\n".join(lines) + "\n"
