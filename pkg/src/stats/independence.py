"""
Independence tests between one predictor and the binary class.

Categorical predictors use the Pearson chi-square test on the level x class
table, numeric predictors the Wilcoxon rank-sum test with a tie-corrected
normal approximation. Neither applies a continuity correction.
"""
from typing import Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from scipy import special
from scipy.stats import rankdata

from src.core.errors import DegenerateTableError


class TestResult(BaseModel):
    """Statistic, degrees of freedom (categorical case only) and p-value of one test."""

    __test__ = False  # keep pytest from collecting this class

    model_config = ConfigDict(frozen=True)

    statistic: float = Field(ge=0.0)
    dof: Optional[int] = Field(default=None, ge=1)
    p_value: float = Field(ge=0.0, le=1.0)


def chi_square_sf(x: float, dof: int) -> float:
    """
    Upper-tail probability of the chi-square distribution.

    Computed as the regularized upper incomplete gamma function Q(dof/2, x/2).
    """
    if x < 0:
        raise ValueError(f"chi-square statistic must be non-negative, got {x}")
    if dof < 1:
        raise ValueError(f"degrees of freedom must be positive, got {dof}")
    if x == 0:
        return 1.0
    return float(min(1.0, max(0.0, special.gammaincc(dof / 2.0, x / 2.0))))


def pearson_statistic(table: np.ndarray) -> float:
    """Pearson chi-square statistic of a table with positive margins."""
    table = np.asarray(table, dtype=np.float64)
    total = table.sum()
    expected = np.outer(table.sum(axis=1), table.sum(axis=0)) / total
    return float(((table - expected) ** 2 / expected).sum())


def chi_square_test(table: Sequence[Sequence[float]]) -> TestResult:
    """
    Pearson chi-square test of independence on an r x 2 contingency table.

    Raises:
        DegenerateTableError: a row or column total is zero
    """
    arr = np.asarray(table, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[1] != 2 or arr.shape[0] < 2:
        raise ValueError(f"expected an r x 2 table with r >= 2, got shape {arr.shape}")
    if np.any(arr < 0):
        raise ValueError("contingency counts must be non-negative")
    if np.any(arr.sum(axis=1) <= 0) or np.any(arr.sum(axis=0) <= 0):
        raise DegenerateTableError(f"table has an empty margin: rows {arr.sum(axis=1)}, columns {arr.sum(axis=0)}")
    statistic = max(0.0, pearson_statistic(arr))
    dof = arr.shape[0] - 1
    return TestResult(statistic=statistic, dof=dof, p_value=chi_square_sf(statistic, dof))


def rank_sum_test(values: Sequence[float], group: Sequence[object]) -> TestResult:
    """
    Two-sided Wilcoxon rank-sum test with mid-ranks and tie-corrected variance.

    `group` holds one of two labels per value; the rank sum is taken over the
    first label in sorted order. The reported statistic is |z|.
    """
    x = np.asarray(values, dtype=np.float64)
    g = np.asarray(group)
    if x.shape != g.shape:
        raise ValueError("values and group must have the same length")
    labels = np.unique(g)
    if len(labels) != 2:
        raise ValueError(f"rank-sum test needs two non-empty groups, found {len(labels)}")
    in_first = g == labels[0]
    n = len(x)
    n1 = int(np.count_nonzero(in_first))
    n2 = n - n1

    ranks = rankdata(x)
    _, tie_sizes = np.unique(x, return_counts=True)
    tie_term = float(np.sum(tie_sizes.astype(np.float64) ** 3 - tie_sizes))
    variance = n1 * n2 / 12.0 * ((n + 1) - tie_term / (n * (n - 1)))
    if variance <= 0:
        return TestResult(statistic=0.0, p_value=1.0)

    w = float(ranks[in_first].sum())
    z = (w - n1 * (n + 1) / 2.0) / np.sqrt(variance)
    p = min(1.0, 2.0 * float(special.ndtr(-abs(z))))
    return TestResult(statistic=abs(float(z)), p_value=p)


def bonferroni(p: float, m: int) -> float:
    """Bonferroni-adjusted p-value, capped at 1."""
    if m < 1:
        raise ValueError(f"number of tests must be positive, got {m}")
    return min(1.0, m * p)
