"""
CSV ingestion and export for Datasets.
"""
from pathlib import Path
from typing import Mapping, Optional, Sequence, Union

import numpy as np
import pandas as pd
from loguru import logger

from src.core.errors import DataIngestionError, SchemaMismatchError
from src.core.utils import format_number
from src.data.models import ClassSpec, Dataset, VariableKind, VariableSchema

PathLike = Union[str, Path]


def _read_raw(path: PathLike) -> pd.DataFrame:
    """Read every cell as a string; no NA interpretation."""
    try:
        df = pd.read_csv(path, dtype=str, keep_default_na=False, na_filter=False, encoding="utf-8")
    except FileNotFoundError:
        raise
    except pd.errors.EmptyDataError as e:
        raise DataIngestionError(f"empty CSV file {path}") from e
    except (pd.errors.ParserError, UnicodeDecodeError) as e:
        raise DataIngestionError(f"cannot parse CSV file {path}: {e}") from e
    _reject_missing(df)
    return df


def _reject_missing(df: pd.DataFrame) -> None:
    missing = df.isna() | df.apply(lambda s: s.astype(str).str.strip() == "")
    if missing.to_numpy().any():
        rows, cols = np.nonzero(missing.to_numpy())
        # first offending cell in reading order
        order = np.lexsort((cols, rows))[0]
        raise DataIngestionError("missing value", row=int(rows[order]) + 1, column=str(df.columns[cols[order]]))


def _parse_numeric(series: pd.Series) -> Optional[np.ndarray]:
    """Float values of a column, or None when any cell is not a finite number."""
    parsed = pd.to_numeric(series.str.strip(), errors="coerce").to_numpy(dtype=np.float64)
    if np.isnan(parsed).any() or not np.isfinite(parsed).all():
        return None
    return parsed


def _resolve_class_spec(labels: pd.Series, class_spec: ClassSpec) -> ClassSpec:
    observed = list(pd.unique(labels))
    if len(observed) != 2:
        raise DataIngestionError(
            f"class column must hold exactly two labels, found {len(observed)}: {observed[:5]}",
            column=class_spec.column,
        )
    if class_spec.labels is not None and set(class_spec.labels) != set(observed):
        raise DataIngestionError(
            f"class labels {observed} differ from declared {list(class_spec.labels)}",
            column=class_spec.column,
        )
    counts = labels.value_counts()
    first, second = observed
    if counts[first] < counts[second]:
        smaller = first
    elif counts[second] < counts[first]:
        smaller = second
    else:
        smaller = None

    if class_spec.small_label is not None:
        if class_spec.small_label not in observed:
            raise DataIngestionError(f"small label '{class_spec.small_label}' never occurs", column=class_spec.column)
        if smaller is not None and class_spec.small_label != smaller:
            raise DataIngestionError(
                f"'{class_spec.small_label}' has {counts[class_spec.small_label]} rows and is not the smaller class",
                column=class_spec.column,
            )
        smaller = class_spec.small_label
    elif smaller is None:
        raise DataIngestionError(
            f"class counts tie at {counts[first]}; choose the small class explicitly",
            column=class_spec.column,
        )

    larger = second if smaller == first else first
    return ClassSpec(column=class_spec.column, labels=(smaller, larger), small_label=smaller)


def load_csv(
    path: PathLike,
    class_spec: ClassSpec,
    overrides: Optional[Mapping[str, VariableKind]] = None,
) -> Dataset:
    """
    Load and validate a CSV corpus.

    Args:
        path: CSV file with a header row
        class_spec: class column, optionally with labels and a forced small label
        overrides: optional kind per column, bypassing inference

    Returns:
        A validated Dataset whose predictors are all non-class columns in file order
    """
    df = _read_raw(path)
    if class_spec.column not in df.columns:
        raise DataIngestionError(f"class column '{class_spec.column}' not found in {path}")
    overrides = dict(overrides or {})
    unknown = set(overrides) - set(df.columns)
    if unknown:
        raise DataIngestionError(f"kind overrides name unknown columns {sorted(unknown)}")

    spec = _resolve_class_spec(df[class_spec.column].str.strip(), class_spec)

    schema: list[VariableSchema] = []
    columns: dict[str, np.ndarray] = {}
    for name in df.columns:
        if name == class_spec.column:
            continue
        series = df[name].str.strip()
        kind = overrides.get(name)
        numeric = _parse_numeric(series) if kind != "categorical" else None
        if kind == "numeric" and numeric is None:
            bad = pd.to_numeric(series, errors="coerce")
            bad_rows = np.flatnonzero(~np.isfinite(bad.to_numpy(dtype=np.float64)))
            raise DataIngestionError(
                f"value '{series.iloc[bad_rows[0]]}' is not a finite number",
                row=int(bad_rows[0]) + 1,
                column=name,
            )
        if numeric is not None:
            schema.append(VariableSchema(name=name, kind="numeric"))
            columns[name] = numeric
        else:
            levels = tuple(pd.unique(series))
            schema.append(VariableSchema(name=name, kind="categorical", levels=levels))
            columns[name] = pd.Categorical(series, categories=levels).codes.astype(np.int64)

    is_small = (df[class_spec.column].str.strip() == spec.small_label).to_numpy()
    ds = Dataset.from_codes(schema, spec, columns, is_small)
    small, large = class_counts(ds)
    logger.info(
        f"Loaded {ds.n_rows} rows from {path}: {len(schema)} predictors, "
        f"small class '{spec.small_label}' {small} vs '{spec.large_label}' {large}"
    )
    return ds


def class_counts(ds: Dataset) -> tuple[int, int]:
    """Row counts per class, ordered (small, large)."""
    small = int(np.count_nonzero(ds.is_small))
    return small, ds.n_rows - small


def write_csv(ds: Dataset, path: PathLike) -> None:
    """
    Write a Dataset as CSV: predictors in schema order, class column last.

    Reloading with `overrides=ds.kinds()` reproduces the Dataset.
    """
    data = {}
    for var in ds.schema:
        raw = ds.values(var.name)
        data[var.name] = list(raw) if var.is_categorical else [format_number(v) for v in raw]
    data[ds.class_spec.column] = list(ds.labels())
    pd.DataFrame(data).to_csv(path, index=False, lineterminator="\n")
    logger.debug(f"Wrote {ds.n_rows} rows to {path}")


def load_features(
    path: PathLike,
    schema: Sequence[VariableSchema],
) -> tuple[dict[str, np.ndarray], int]:
    """
    Load predictor columns of new data against a stored schema.

    Unseen categorical levels are kept as-is; extra columns (including a class
    column) are ignored.

    Returns:
        (frame of raw values keyed by predictor name, number of rows)
    """
    df = _read_raw(path)
    if len(df) == 0:
        raise DataIngestionError(f"no data rows in {path}")
    frame: dict[str, np.ndarray] = {}
    for var in schema:
        if var.name not in df.columns:
            raise SchemaMismatchError("missing from input data", column=var.name)
        series = df[var.name].str.strip()
        if var.is_categorical:
            frame[var.name] = series.to_numpy(dtype=object)
        else:
            numeric = _parse_numeric(series)
            if numeric is None:
                raise SchemaMismatchError("expected finite numeric values", column=var.name)
            frame[var.name] = numeric
        unseen = set(frame[var.name]) - set(var.levels) if var.is_categorical else set()
        if unseen:
            logger.warning(f"Column '{var.name}' has levels unseen in training: {sorted(unseen)}")
    return frame, len(df)
