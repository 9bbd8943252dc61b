from src.tree.ctree import best_split, grow, select_variable
from src.tree.export import to_dot
from src.tree.models import (
    CategoricalRule,
    LeafNode,
    NumericRule,
    Split,
    SplitNode,
    Tree,
    TreeParams,
    collect_splits,
    first_split,
    make_leaf,
    tree_size,
)
from src.tree.predict import predict, predict_all, predict_small, route

__all__ = [
    "TreeParams",
    "NumericRule",
    "CategoricalRule",
    "Split",
    "LeafNode",
    "SplitNode",
    "Tree",
    "make_leaf",
    "collect_splits",
    "tree_size",
    "first_split",
    "select_variable",
    "best_split",
    "grow",
    "predict",
    "predict_all",
    "predict_small",
    "route",
    "to_dot",
]
