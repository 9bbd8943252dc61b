"""
Tabular data model: variable schemas, the class specification and the
immutable column-oriented Dataset.
"""
from typing import Any, Literal, Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, PrivateAttr, field_validator, model_validator

from src.core.errors import DataIngestionError

VariableKind = Literal["categorical", "numeric"]


class VariableSchema(BaseModel):
    """Name and kind of one predictor column."""

    model_config = ConfigDict(frozen=True)

    name: str
    kind: VariableKind
    levels: tuple[str, ...] = ()

    @model_validator(mode="after")
    def _check_levels(self) -> "VariableSchema":
        if self.kind == "categorical":
            if not self.levels:
                raise ValueError(f"categorical variable '{self.name}' needs at least one level")
            if len(set(self.levels)) != len(self.levels):
                raise ValueError(f"categorical variable '{self.name}' has duplicate levels")
        elif self.levels:
            raise ValueError(f"numeric variable '{self.name}' cannot declare levels")
        return self

    @property
    def is_categorical(self) -> bool:
        return self.kind == "categorical"


class ClassSpec(BaseModel):
    """
    Binary class column and the designated smaller class.

    `labels` and `small_label` may be left open when handed to the loader;
    the loader returns a resolved spec with both filled in. A resolved
    spec lists the small label first.
    """

    model_config = ConfigDict(frozen=True)

    column: str
    labels: Optional[tuple[str, str]] = None
    small_label: Optional[str] = None

    @model_validator(mode="after")
    def _check_labels(self) -> "ClassSpec":
        if self.labels is not None:
            if self.labels[0] == self.labels[1]:
                raise ValueError("class labels must be distinct")
            if self.small_label is not None and self.small_label not in self.labels:
                raise ValueError(f"small label '{self.small_label}' is not one of {list(self.labels)}")
        return self

    @property
    def is_resolved(self) -> bool:
        return self.labels is not None and self.small_label is not None

    @property
    def large_label(self) -> str:
        if not self.is_resolved:
            raise ValueError("class spec is not resolved")
        return self.labels[1] if self.labels[0] == self.small_label else self.labels[0]

    @property
    def ordered_labels(self) -> tuple[str, str]:
        """(small, large)."""
        return (self.small_label, self.large_label)


class Dataset(BaseModel):
    """
    Predictor columns plus a binary class vector.

    Categorical columns hold integer codes into `VariableSchema.levels`,
    numeric columns hold float64 values. `is_small` is True for rows of the
    smaller class. All arrays are read-only once the Dataset is built.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    schema_: tuple[VariableSchema, ...]
    class_spec: ClassSpec
    columns: dict[str, np.ndarray]
    is_small: np.ndarray
    n_rows: int

    _frame: dict[str, np.ndarray] = PrivateAttr(default_factory=dict)

    def __init__(self, schema: Sequence[VariableSchema], **data: Any):
        super().__init__(schema_=tuple(schema), **data)

    @field_validator("is_small", mode="before")
    @classmethod
    def _as_bool(cls, v: Any) -> np.ndarray:
        arr = np.asarray(v, dtype=bool).copy()
        arr.flags.writeable = False
        return arr

    @model_validator(mode="after")
    def _check_columns(self) -> "Dataset":
        if not self.class_spec.is_resolved:
            raise ValueError("dataset requires a resolved class spec")
        names = [v.name for v in self.schema_]
        if len(set(names)) != len(names):
            raise ValueError("variable names must be unique")
        if self.class_spec.column in names:
            raise ValueError(f"class column '{self.class_spec.column}' cannot be a predictor")
        if set(names) != set(self.columns):
            raise ValueError("columns do not match the schema")
        if len(self.is_small) != self.n_rows:
            raise ValueError("class vector length differs from n_rows")
        for var in self.schema_:
            col = self.columns[var.name]
            if len(col) != self.n_rows:
                raise ValueError(f"column '{var.name}' has {len(col)} values, expected {self.n_rows}")
            if var.is_categorical:
                if col.size and (col.min() < 0 or col.max() >= len(var.levels)):
                    raise ValueError(f"column '{var.name}' has codes outside its levels")
            elif not np.all(np.isfinite(col)):
                raise ValueError(f"column '{var.name}' has non-finite values")
            col.flags.writeable = False
        return self

    @classmethod
    def from_codes(
        cls,
        schema: Sequence[VariableSchema],
        class_spec: ClassSpec,
        columns: dict[str, Sequence[Any]],
        is_small: Sequence[bool],
    ) -> "Dataset":
        """Build a Dataset, copying every column into a typed array."""
        typed = {}
        for var in schema:
            dtype = np.int64 if var.is_categorical else np.float64
            typed[var.name] = np.array(columns[var.name], dtype=dtype)
        return cls(schema=schema, class_spec=class_spec, columns=typed, is_small=is_small, n_rows=len(is_small))

    @classmethod
    def from_values(
        cls,
        schema: Sequence[VariableSchema],
        class_spec: ClassSpec,
        values: dict[str, Sequence[Any]],
        labels: Sequence[str],
    ) -> "Dataset":
        """Build a Dataset from raw level strings / numbers and raw class labels."""
        codes: dict[str, Sequence[Any]] = {}
        for var in schema:
            if var.is_categorical:
                index = {level: i for i, level in enumerate(var.levels)}
                codes[var.name] = [index[str(v)] for v in values[var.name]]
            else:
                codes[var.name] = [float(v) for v in values[var.name]]
        is_small = [label == class_spec.small_label for label in labels]
        return cls.from_codes(schema, class_spec, codes, is_small)

    @property
    def schema(self) -> tuple[VariableSchema, ...]:
        return self.schema_

    @property
    def predictors(self) -> list[str]:
        return [v.name for v in self.schema_]

    def variable(self, name: str) -> VariableSchema:
        for var in self.schema_:
            if var.name == name:
                return var
        raise KeyError(name)

    def kinds(self) -> dict[str, VariableKind]:
        """Kind per predictor, usable as loader overrides."""
        return {v.name: v.kind for v in self.schema_}

    def values(self, name: str) -> np.ndarray:
        """Raw values of one column: level strings for categorical, floats for numeric."""
        return self.frame()[name]

    def frame(self) -> dict[str, np.ndarray]:
        """Raw values of every predictor column, keyed by name."""
        if not self._frame:
            for var in self.schema_:
                col = self.columns[var.name]
                if var.is_categorical:
                    raw = np.asarray(var.levels, dtype=object)[col]
                else:
                    raw = col.copy()
                raw.flags.writeable = False
                self._frame[var.name] = raw
        return self._frame

    def labels(self) -> np.ndarray:
        """Class label string of every row."""
        small, large = self.class_spec.ordered_labels
        return np.where(self.is_small, small, large).astype(object)

    def row(self, i: int) -> dict[str, Any]:
        frame = self.frame()
        return {name: frame[name][i] for name in self.predictors}

    def select(self, predictors: Sequence[str]) -> "Dataset":
        """
        Restrict the Dataset to a subset of predictors, keeping the given order.

        Raises:
            DataIngestionError: a name is the class column or not a predictor
        """
        for p in predictors:
            if p == self.class_spec.column:
                raise DataIngestionError("the class column cannot be used as a predictor", column=p)
            if p not in self.columns:
                raise DataIngestionError(f"unknown predictor, expected one of {self.predictors}", column=p)
        schema = [self.variable(p) for p in predictors]
        return Dataset(
            schema=schema,
            class_spec=self.class_spec,
            columns={p: self.columns[p] for p in predictors},
            is_small=self.is_small,
            n_rows=self.n_rows,
        )

    def take(self, indices: Sequence[int]) -> "Dataset":
        """New Dataset made of the given rows (duplicates allowed), schema unchanged."""
        idx = np.asarray(indices, dtype=np.int64)
        return Dataset(
            schema=self.schema_,
            class_spec=self.class_spec,
            columns={name: col[idx] for name, col in self.columns.items()},
            is_small=self.is_small[idx],
            n_rows=len(idx),
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Dataset):
            return NotImplemented
        return (
            self.schema_ == other.schema_
            and self.class_spec == other.class_spec
            and self.n_rows == other.n_rows
            and np.array_equal(self.is_small, other.is_small)
            and all(np.array_equal(self.columns[n], other.columns[n]) for n in self.predictors)
        )

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        small, large = np.count_nonzero(self.is_small), self.n_rows - np.count_nonzero(self.is_small)
        return f"<Dataset rows={self.n_rows} predictors={self.predictors} small={small} large={large}>"
