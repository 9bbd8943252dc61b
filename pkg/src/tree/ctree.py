"""
Conditional inference tree growth.

A node is split only when the best predictor's Bonferroni-adjusted
independence test clears `alpha`; the split point for that predictor is the
candidate maximizing the chi-square statistic of the induced side x class
table.
"""
from typing import Optional, Sequence, Union

import numpy as np
from loguru import logger

from src.core.errors import DegenerateTableError, NoValidSplit
from src.data.models import Dataset
from src.stats.independence import bonferroni, chi_square_test, rank_sum_test
from src.tree.models import (
    CategoricalRule,
    LeafNode,
    NumericRule,
    Split,
    SplitNode,
    Tree,
    TreeParams,
    make_leaf,
)

# relative slack when comparing candidate statistics for ties
_TIE_TOLERANCE = 1e-12


def _as_rows(rows: Sequence[int]) -> np.ndarray:
    return np.asarray(rows, dtype=np.int64)


def _level_table(ds: Dataset, rows: np.ndarray, variable: str) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Observed level codes (schema order) with their small-class and total counts."""
    n_levels = len(ds.variable(variable).levels)
    codes = ds.columns[variable][rows]
    y = ds.is_small[rows]
    totals = np.bincount(codes, minlength=n_levels)
    small = np.bincount(codes, weights=y, minlength=n_levels).astype(np.int64)
    observed = np.flatnonzero(totals > 0)
    return observed, small[observed], totals[observed]


def _test_predictor(ds: Dataset, rows: np.ndarray, variable: str) -> Optional[float]:
    """Unadjusted p-value of one predictor, None when it cannot be tested at this node."""
    var = ds.variable(variable)
    if var.is_categorical:
        _, small, totals = _level_table(ds, rows, variable)
        if len(totals) < 2:
            return None
        table = np.column_stack([small, totals - small])
        try:
            return chi_square_test(table).p_value
        except DegenerateTableError:
            return None
    values = ds.columns[variable][rows]
    if np.unique(values).size < 2:
        return None
    y = ds.is_small[rows]
    if y.all() or not y.any():
        return None
    return rank_sum_test(values, y).p_value


def select_variable(ds: Dataset, rows: Sequence[int], params: TreeParams) -> Optional[tuple[str, float]]:
    """
    Pick the predictor with the smallest Bonferroni-adjusted p-value.

    Args:
        ds: full dataset
        rows: indices of the rows at the node
        params: tree parameters (only alpha is used)

    Returns:
        (variable, adjusted p-value) when it is <= alpha, otherwise None
    """
    rows = _as_rows(rows)
    if rows.size == 0:
        raise ValueError("select_variable needs at least one row")
    y = ds.is_small[rows]
    if y.all() or not y.any():
        return None

    tested: list[tuple[str, float]] = []
    for name in ds.predictors:
        p = _test_predictor(ds, rows, name)
        if p is not None:
            tested.append((name, p))
    if not tested:
        return None

    m = len(tested)
    best_name, best_p = None, 2.0
    for name, p in tested:
        adjusted = bonferroni(p, m)
        # strict comparison keeps the earliest predictor in schema order on ties
        if adjusted < best_p:
            best_name, best_p = name, adjusted
    logger.debug(f"select_variable: {m} predictors tested, best {best_name} p_adj={best_p:.3g}")
    if best_p <= params.alpha:
        return best_name, best_p
    return None


def _two_by_two_statistic(left_small, left_n, n_small, n):
    """Vectorized Pearson statistic of the side x class table; zero where a margin is empty."""
    left_small = np.asarray(left_small, dtype=np.float64)
    left_n = np.asarray(left_n, dtype=np.float64)
    left_large = left_n - left_small
    right_small = n_small - left_small
    right_large = (n - left_n) - right_small
    denom = left_n * (n - left_n) * n_small * (n - n_small)
    num = n * (left_small * right_large - left_large * right_small) ** 2
    with np.errstate(divide="ignore", invalid="ignore"):
        stat = np.where(denom > 0, num / np.where(denom > 0, denom, 1.0), 0.0)
    return stat


def _best_candidates(stat: np.ndarray, valid: np.ndarray) -> np.ndarray:
    """Indices of valid candidates tying for the largest statistic."""
    if not valid.any():
        raise NoValidSplit("no candidate satisfies min_bucket")
    best = stat[valid].max()
    return np.flatnonzero(valid & (stat >= best - _TIE_TOLERANCE * max(1.0, best)))


def _best_numeric_split(ds: Dataset, rows: np.ndarray, variable: str, params: TreeParams) -> NumericRule:
    x = ds.columns[variable][rows]
    y = ds.is_small[rows]
    order = np.argsort(x, kind="stable")
    xs, ys = x[order], y[order]
    n = len(xs)
    cut = np.flatnonzero(xs[:-1] != xs[1:])  # last index of each left block
    if cut.size == 0:
        raise NoValidSplit(f"'{variable}' is constant at this node")
    left_n = cut + 1
    left_small = np.cumsum(ys)[cut]
    stat = _two_by_two_statistic(left_small, left_n, int(ys.sum()), n)
    valid = (left_n >= params.min_bucket) & (n - left_n >= params.min_bucket)
    # candidates are in ascending threshold order, so the first tie wins
    choice = _best_candidates(stat, valid)[0]
    i = cut[choice]
    return NumericRule(threshold=float((xs[i] + xs[i + 1]) / 2.0))


def _categorical_partitions(small: np.ndarray, totals: np.ndarray, max_levels: int) -> np.ndarray:
    """
    Candidate left-side masks over the observed levels (rows = candidates).

    The first observed level is always on the left, so every binary partition
    appears once. Above `max_levels` only the contiguous cuts of the levels
    ordered by small-class proportion are considered.
    """
    r = len(totals)
    if r <= max_levels:
        m = np.arange(2 ** (r - 1) - 1, dtype=np.int64)
        bits = (m[:, None] >> np.arange(r - 1)[None, :]) & 1
        return np.column_stack([np.ones(len(m), dtype=bool), bits.astype(bool)])
    order = np.argsort(-(small / totals), kind="stable")
    masks = np.zeros((r - 1, r), dtype=bool)
    for k in range(1, r):
        masks[k - 1, order[:k]] = True
    flip = ~masks[:, 0]
    masks[flip] = ~masks[flip]
    return masks


def _best_categorical_split(ds: Dataset, rows: np.ndarray, variable: str, params: TreeParams) -> CategoricalRule:
    observed, small, totals = _level_table(ds, rows, variable)
    if len(observed) < 2:
        raise NoValidSplit(f"'{variable}' has a single level at this node")
    masks = _categorical_partitions(small, totals, params.max_levels_for_split_search)
    left_n = masks.astype(np.int64) @ totals
    left_small = masks.astype(np.int64) @ small
    n = int(totals.sum())
    stat = _two_by_two_statistic(left_small, left_n, int(small.sum()), n)
    valid = (left_n >= params.min_bucket) & (n - left_n >= params.min_bucket)
    ties = _best_candidates(stat, valid)
    # lexicographically smallest left set in schema order
    choice = min(ties, key=lambda k: tuple(observed[masks[k]]))
    levels = ds.variable(variable).levels
    left = tuple(levels[c] for c in observed[masks[choice]])
    right = tuple(levels[c] for c in observed[~masks[choice]])
    return CategoricalRule(left=left, right=right)


def best_split(
    ds: Dataset,
    rows: Sequence[int],
    variable: str,
    params: TreeParams,
    p_adjusted: float = 0.0,
) -> Split:
    """
    Best binary split on one variable.

    Raises:
        NoValidSplit: the node is pure or no candidate leaves min_bucket rows on both sides
    """
    rows = _as_rows(rows)
    y = ds.is_small[rows]
    if y.all() or not y.any():
        raise NoValidSplit("node is pure")
    if ds.variable(variable).is_categorical:
        rule: Union[NumericRule, CategoricalRule] = _best_categorical_split(ds, rows, variable, params)
    else:
        rule = _best_numeric_split(ds, rows, variable, params)
    return Split(variable=variable, rule=rule, p_adjusted=p_adjusted)


def _left_mask(ds: Dataset, rows: np.ndarray, split: Split) -> np.ndarray:
    col = ds.columns[split.variable][rows]
    if isinstance(split.rule, NumericRule):
        return col <= split.rule.threshold
    levels = ds.variable(split.variable).levels
    left_codes = [levels.index(level) for level in split.rule.left]
    return np.isin(col, left_codes)


def _grow_node(ds: Dataset, rows: np.ndarray, params: TreeParams, labels: tuple[str, str], depth: int) -> Union[SplitNode, LeafNode]:
    n_small = int(np.count_nonzero(ds.is_small[rows]))
    n_large = len(rows) - n_small
    if len(rows) < params.min_split or n_small == 0 or n_large == 0:
        return make_leaf(n_small, n_large, labels)
    chosen = select_variable(ds, rows, params)
    if chosen is None:
        return make_leaf(n_small, n_large, labels)
    variable, p_adjusted = chosen
    try:
        split = best_split(ds, rows, variable, params, p_adjusted=p_adjusted)
    except NoValidSplit as e:
        logger.debug(f"depth {depth}: {variable} selected but not split ({e})")
        return make_leaf(n_small, n_large, labels)
    mask = _left_mask(ds, rows, split)
    return SplitNode(
        variable=split.variable,
        rule=split.rule,
        p_adjusted=split.p_adjusted,
        left=_grow_node(ds, rows[mask], params, labels, depth + 1),
        right=_grow_node(ds, rows[~mask], params, labels, depth + 1),
    )


def grow(ds: Dataset, row_subset: Sequence[int], params: Optional[TreeParams] = None) -> Tree:
    """
    Grow a conditional inference tree on a subset of rows.

    Args:
        ds: full dataset
        row_subset: indices of the training rows
        params: tree parameters, defaults when omitted

    Returns:
        The grown Tree
    """
    params = params or TreeParams()
    rows = _as_rows(row_subset)
    if rows.size == 0:
        raise ValueError("cannot grow a tree on an empty row subset")
    root = _grow_node(ds, rows, params, ds.class_spec.ordered_labels, depth=0)
    return Tree(labels=ds.class_spec.ordered_labels, root=root)
