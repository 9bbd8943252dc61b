"""
Ensembles of interpretable trees with unweighted majority voting.

Three selectors are provided: the k most accurate interpretable trees, all
interpretable trees, and the interpretable trees whose balanced accuracy
exceeds a cut (by default the median over all repetitions).
"""
from typing import Any, Literal, Mapping, Optional, Sequence

import numpy as np
from loguru import logger
from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.core.errors import EmptyEnsembleError
from src.data.models import Dataset
from src.evaluate.metrics import balanced_accuracy_arrays, lower_median
from src.resample.runner import TreeRecord
from src.tree.predict import Frame, predict, predict_small

SelectorKind = Literal["top_k", "all_interpretable", "above_threshold"]


class EnsembleSelector(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: SelectorKind
    k: Optional[int] = Field(default=None, ge=1)
    c: Optional[float] = Field(default=None, ge=0.0, le=1.0)

    @model_validator(mode="after")
    def _check_args(self) -> "EnsembleSelector":
        if self.kind == "top_k" and self.k is None:
            raise ValueError("top_k needs k")
        if self.kind != "top_k" and self.k is not None:
            raise ValueError(f"{self.kind} takes no k")
        if self.kind != "above_threshold" and self.c is not None:
            raise ValueError(f"{self.kind} takes no threshold")
        return self

    @classmethod
    def top_k(cls, k: int) -> "EnsembleSelector":
        return cls(kind="top_k", k=k)

    @classmethod
    def all_interpretable(cls) -> "EnsembleSelector":
        return cls(kind="all_interpretable")

    @classmethod
    def above_threshold(cls, c: Optional[float] = None) -> "EnsembleSelector":
        return cls(kind="above_threshold", c=c)

    @classmethod
    def parse(cls, text: str) -> "EnsembleSelector":
        """Parse `top:K`, `all` or `above[:C]`."""
        head, _, arg = text.strip().partition(":")
        head = head.lower()
        try:
            if head in ("top", "top_k"):
                return cls.top_k(int(arg))
            if head in ("all", "all_interpretable") and not arg:
                return cls.all_interpretable()
            if head in ("above", "above_threshold"):
                return cls.above_threshold(float(arg) if arg else None)
        except ValueError as e:
            raise ValueError(f"invalid selector '{text}': {e}") from e
        raise ValueError(f"invalid selector '{text}'; expected top:K, all or above[:C]")

    def __str__(self) -> str:
        if self.kind == "top_k":
            return f"top_k({self.k})"
        if self.kind == "above_threshold":
            return "above_threshold(median)" if self.c is None else f"above_threshold({self.c})"
        return "all_interpretable"


class Ensemble(BaseModel):
    model_config = ConfigDict(frozen=True)

    members: tuple[TreeRecord, ...]
    selector: EnsembleSelector
    threshold: Optional[float] = None  # cut actually applied by above_threshold

    @model_validator(mode="after")
    def _check_members(self) -> "Ensemble":
        if not self.members:
            raise ValueError("an ensemble needs at least one member")
        if not all(m.interpretable for m in self.members):
            raise ValueError("ensemble members must be interpretable")
        return self

    @property
    def labels(self) -> tuple[str, str]:
        return self.members[0].tree.labels

    def __len__(self) -> int:
        return len(self.members)


def build_ensemble(
    records: Sequence[TreeRecord],
    selector: EnsembleSelector,
    median: Optional[float] = None,
) -> Ensemble:
    """
    Select ensemble members from the repetition records.

    Args:
        records: all repetition records
        selector: selection rule
        median: default above_threshold cut; computed over `records` when omitted

    Raises:
        EmptyEnsembleError: the selection kept nothing
    """
    if not records:
        raise ValueError("no records to build an ensemble from")
    chain = [f"{len(records)} records"]
    pool = [r for r in records if r.interpretable]
    chain.append(f"{len(pool)} interpretable")
    threshold = None
    if selector.kind == "top_k":
        pool = sorted(pool, key=lambda r: (-r.balanced_accuracy, r.rep_index))[: selector.k]
        chain.append(f"{len(pool)} in top {selector.k}")
    elif selector.kind == "above_threshold":
        if selector.c is not None:
            threshold = selector.c
        elif median is not None:
            threshold = median
        else:
            threshold = lower_median([r.balanced_accuracy for r in records])
        pool = [r for r in pool if r.balanced_accuracy > threshold]
        chain.append(f"{len(pool)} above {threshold:.4f}")
    if not pool:
        raise EmptyEnsembleError(str(selector), chain)
    logger.debug(f"Ensemble {selector}: {' -> '.join(chain)}")
    return Ensemble(members=tuple(pool), selector=selector, threshold=threshold)


def best_tree(records: Sequence[TreeRecord]) -> TreeRecord:
    """The interpretable record with the highest balanced accuracy (lowest rep on ties)."""
    return build_ensemble(records, EnsembleSelector.top_k(1)).members[0]


def ensemble_predict(e: Ensemble, row: Mapping[str, Any]) -> str:
    """Majority vote of the member trees; an exact tie goes to the small class."""
    small_label, large_label = e.labels
    small_votes = sum(predict(m.tree, row)[0] == small_label for m in e.members)
    return small_label if 2 * small_votes >= len(e.members) else large_label


def ensemble_predict_small(e: Ensemble, frame: Frame, n_rows: Optional[int] = None) -> np.ndarray:
    """Vectorized majority vote; True where the ensemble predicts the small class."""
    votes = None
    for member in e.members:
        small = predict_small(member.tree, frame, n_rows=n_rows).astype(np.int64)
        votes = small if votes is None else votes + small
    return 2 * votes >= len(e.members)


def ensemble_predict_all(e: Ensemble, frame: Frame, n_rows: Optional[int] = None) -> np.ndarray:
    """Predicted label of every row of a frame."""
    small_label, large_label = e.labels
    return np.where(ensemble_predict_small(e, frame, n_rows=n_rows), small_label, large_label).astype(object)


def ensemble_accuracy(e: Ensemble, ds: Dataset) -> float:
    """Balanced accuracy of the ensemble vote over every row."""
    return balanced_accuracy_arrays(ds.is_small, ensemble_predict_small(e, ds.frame(), n_rows=ds.n_rows))
