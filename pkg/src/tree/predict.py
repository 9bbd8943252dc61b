"""
Routing rows through a grown tree.
"""
from typing import Any, Mapping, Union

import numpy as np

from src.tree.models import CategoricalRule, LeafNode, NumericRule, SplitNode, Tree

Frame = Mapping[str, np.ndarray]


def predict(tree: Tree, row: Mapping[str, Any]) -> tuple[str, tuple[float, float]]:
    """
    Route one row to its leaf.

    Returns:
        (predicted label, class frequencies ordered small/large)
    """
    node: Union[SplitNode, LeafNode] = tree.root
    while isinstance(node, SplitNode):
        node = node.left if node.split.goes_left(row[node.variable]) else node.right
    return node.predicted, node.freqs


def _left_mask(node: SplitNode, values: np.ndarray) -> np.ndarray:
    if isinstance(node.rule, NumericRule):
        return values.astype(np.float64) <= node.rule.threshold
    assert isinstance(node.rule, CategoricalRule)
    return np.isin(values.astype(object), np.asarray(node.rule.left, dtype=object))


def _frame_length(frame: Frame) -> int:
    lengths = {len(col) for col in frame.values()}
    if len(lengths) > 1:
        raise ValueError("frame columns differ in length")
    return lengths.pop() if lengths else 0


def route(tree: Tree, frame: Frame, n_rows: int | None = None) -> list[tuple[LeafNode, np.ndarray]]:
    """
    Partition the rows of a frame by leaf.

    Args:
        tree: grown tree
        frame: raw column values keyed by predictor name
        n_rows: row count, needed only when the frame has no columns

    Returns:
        (leaf, row indices) pairs in preorder; every row appears exactly once
    """
    n = _frame_length(frame) if frame else (n_rows or 0)
    out: list[tuple[LeafNode, np.ndarray]] = []
    stack: list[tuple[Union[SplitNode, LeafNode], np.ndarray]] = [(tree.root, np.arange(n))]
    while stack:
        node, idx = stack.pop()
        if isinstance(node, LeafNode):
            out.append((node, idx))
            continue
        mask = _left_mask(node, frame[node.variable][idx])
        stack.append((node.right, idx[~mask]))
        stack.append((node.left, idx[mask]))
    return out


def predict_small(tree: Tree, frame: Frame, n_rows: int | None = None) -> np.ndarray:
    """Boolean vector, True where the tree predicts the small class."""
    n = _frame_length(frame) if frame else (n_rows or 0)
    result = np.zeros(n, dtype=bool)
    for leaf, idx in route(tree, frame, n_rows=n):
        result[idx] = leaf.predicted == tree.labels[0]
    return result


def predict_all(tree: Tree, frame: Frame, n_rows: int | None = None) -> np.ndarray:
    """Predicted label of every row of a frame."""
    small = predict_small(tree, frame, n_rows=n_rows)
    return np.where(small, tree.labels[0], tree.labels[1]).astype(object)
