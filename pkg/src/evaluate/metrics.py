"""
Accuracy metrics, including the hybrid fit/prediction balanced accuracy used
to score trees grown under undersampling.
"""
from typing import NamedTuple, Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from src.core.errors import UndefinedMetricError
from src.data.models import Dataset
from src.tree.models import Tree
from src.tree.predict import predict_small


class Prediction(NamedTuple):
    row_index: int
    predicted: str


def _prediction_vectors(preds: Sequence[Prediction], ds: Dataset) -> tuple[np.ndarray, np.ndarray]:
    """(true is_small, predicted is_small) over the covered rows."""
    if not preds:
        raise UndefinedMetricError("no predictions given")
    idx = np.fromiter((p.row_index for p in preds), dtype=np.int64, count=len(preds))
    if np.unique(idx).size != idx.size:
        raise ValueError("predictions must cover distinct rows")
    small_label, large_label = ds.class_spec.ordered_labels
    predicted = [p.predicted for p in preds]
    unknown = set(predicted) - {small_label, large_label}
    if unknown:
        raise ValueError(f"predicted labels {sorted(unknown)} are not class labels")
    pred_small = np.fromiter((p == small_label for p in predicted), dtype=bool, count=len(preds))
    return ds.is_small[idx], pred_small


def balanced_accuracy_arrays(true_small: np.ndarray, pred_small: np.ndarray) -> float:
    """Mean of the two per-class accuracies from boolean class vectors."""
    true_small = np.asarray(true_small, dtype=bool)
    pred_small = np.asarray(pred_small, dtype=bool)
    n_small = np.count_nonzero(true_small)
    n_large = true_small.size - n_small
    if n_small == 0 or n_large == 0:
        raise UndefinedMetricError(f"balanced accuracy needs both classes (small={n_small}, large={n_large})")
    acc_small = np.count_nonzero(true_small & pred_small) / n_small
    acc_large = np.count_nonzero(~true_small & ~pred_small) / n_large
    return float((acc_small + acc_large) / 2.0)


def overall_accuracy(preds: Sequence[Prediction], ds: Dataset) -> float:
    """Fraction of predictions matching the true class."""
    true_small, pred_small = _prediction_vectors(preds, ds)
    return float(np.count_nonzero(true_small == pred_small) / true_small.size)


def balanced_accuracy(preds: Sequence[Prediction], ds: Dataset) -> float:
    """Mean of accuracy on small-class rows and accuracy on large-class rows."""
    true_small, pred_small = _prediction_vectors(preds, ds)
    return balanced_accuracy_arrays(true_small, pred_small)


def predict_dataset(tree: Tree, ds: Dataset) -> list[Prediction]:
    """Predictions of a tree for every row of a dataset."""
    small = predict_small(tree, ds.frame(), n_rows=ds.n_rows)
    small_label, large_label = tree.labels
    return [Prediction(i, small_label if s else large_label) for i, s in enumerate(small)]


def prindt_accuracy(tree: Tree, ds: Dataset) -> float:
    """
    Balanced accuracy of a tree over the full dataset.

    When the training rows held the whole small class, this scores the small
    class on fit and the large class on fit plus hold-out prediction.
    """
    return balanced_accuracy_arrays(ds.is_small, predict_small(tree, ds.frame(), n_rows=ds.n_rows))


class ClassAccuracies(BaseModel):
    """Per-part accuracies behind the hybrid score of one repetition."""

    model_config = ConfigDict(frozen=True)

    small_fit: float
    large_fit: float
    large_holdout: Optional[float] = None


def class_accuracies(tree: Tree, ds: Dataset, train_rows: Sequence[int], holdout_rows: Sequence[int]) -> ClassAccuracies:
    """
    Small-class fit accuracy, large-class fit accuracy and large-class
    hold-out accuracy of one repetition's tree.
    """
    pred_small = predict_small(tree, ds.frame(), n_rows=ds.n_rows)
    correct = pred_small == ds.is_small
    train = np.asarray(train_rows, dtype=np.int64)
    holdout = np.asarray(holdout_rows, dtype=np.int64)
    train_small = train[ds.is_small[train]]
    train_large = train[~ds.is_small[train]]
    if train_small.size == 0 or train_large.size == 0:
        raise UndefinedMetricError("training rows must contain both classes")
    return ClassAccuracies(
        small_fit=float(correct[train_small].mean()),
        large_fit=float(correct[train_large].mean()),
        large_holdout=float(correct[holdout].mean()) if holdout.size else None,
    )


class HistogramBin(BaseModel):
    model_config = ConfigDict(frozen=True)

    low: float
    high: float
    count: int = Field(ge=0)


class Histogram(BaseModel):
    """Equal-width bins over [min, max] plus summary statistics."""

    model_config = ConfigDict(frozen=True)

    bins: tuple[HistogramBin, ...]
    min: float
    max: float
    median: float


def lower_median(values: Sequence[float]) -> float:
    """Median; for an even count the lower of the two central values."""
    if len(values) == 0:
        raise ValueError("median of an empty sequence")
    ordered = np.sort(np.asarray(values, dtype=np.float64))
    return float(ordered[(len(ordered) - 1) // 2])


def histogram(values: Sequence[float], bins: int) -> Histogram:
    """
    Equal-width histogram; every bin is half-open except the last, which is closed.

    Constant input yields one bin [v, v] holding every value.
    """
    if bins < 1:
        raise ValueError(f"number of bins must be positive, got {bins}")
    arr = np.asarray(values, dtype=np.float64)
    if arr.size == 0:
        raise ValueError("histogram of an empty sequence")
    lo, hi = float(arr.min()), float(arr.max())
    if lo == hi:
        cells = (HistogramBin(low=lo, high=hi, count=int(arr.size)),)
    else:
        counts, edges = np.histogram(arr, bins=bins, range=(lo, hi))
        cells = tuple(
            HistogramBin(low=float(edges[i]), high=float(edges[i + 1]), count=int(counts[i])) for i in range(bins)
        )
    return Histogram(bins=cells, min=lo, max=hi, median=lower_median(arr))
