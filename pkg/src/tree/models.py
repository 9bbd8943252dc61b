"""
Tree data model: parameters, split rules, nodes and the Tree itself.

Nodes serialize to the model-file layout directly:
{"kind": "split", "variable", "rule", "p_adjusted", "left", "right"} or
{"kind": "leaf", "counts", "freqs", "predicted"}.
"""
from typing import Annotated, Any, Iterator, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.core.utils import format_number


class TreeParams(BaseModel):
    """Stopping and search parameters for tree growth."""

    model_config = ConfigDict(frozen=True)

    alpha: float = Field(default=0.01, gt=0.0, lt=1.0)
    min_split: int = 20
    min_bucket: int = Field(default=7, ge=1)
    max_levels_for_split_search: int = Field(default=20, ge=2)

    @model_validator(mode="after")
    def _check_sizes(self) -> "TreeParams":
        if self.min_split < 2 * self.min_bucket:
            raise ValueError(f"min_split ({self.min_split}) must be at least 2 * min_bucket ({self.min_bucket})")
        return self


class NumericRule(BaseModel):
    """Left branch takes values <= threshold."""

    model_config = ConfigDict(frozen=True)

    type: Literal["numeric"] = "numeric"
    threshold: float

    def describe(self, left: bool) -> str:
        return f"{'<=' if left else '>'} {format_number(self.threshold)}"


class CategoricalRule(BaseModel):
    """Left branch takes the listed levels; everything else, unseen levels included, goes right."""

    model_config = ConfigDict(frozen=True)

    type: Literal["categorical"] = "categorical"
    left: tuple[str, ...]
    right: tuple[str, ...]

    @model_validator(mode="after")
    def _check_sets(self) -> "CategoricalRule":
        if not self.left or not self.right:
            raise ValueError("both branches of a categorical split need at least one level")
        if set(self.left) & set(self.right):
            raise ValueError("categorical branches must be disjoint")
        return self

    def describe(self, left: bool) -> str:
        return "{" + ", ".join(self.left if left else self.right) + "}"


SplitRule = Annotated[Union[NumericRule, CategoricalRule], Field(discriminator="type")]


class Split(BaseModel):
    """Decision of one inner node."""

    model_config = ConfigDict(frozen=True)

    variable: str
    rule: SplitRule
    p_adjusted: float = Field(ge=0.0, le=1.0)

    def goes_left(self, value: Any) -> bool:
        if isinstance(self.rule, NumericRule):
            return float(value) <= self.rule.threshold
        return str(value) in self.rule.left


class LeafNode(BaseModel):
    """Terminal node with class counts and frequencies, ordered (small, large)."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["leaf"] = "leaf"
    counts: tuple[int, int]
    freqs: tuple[float, float]
    predicted: str

    @property
    def n(self) -> int:
        return self.counts[0] + self.counts[1]


class SplitNode(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: Literal["split"] = "split"
    variable: str
    rule: SplitRule
    p_adjusted: float = Field(ge=0.0, le=1.0)
    left: "Node"
    right: "Node"

    @property
    def split(self) -> Split:
        return Split(variable=self.variable, rule=self.rule, p_adjusted=self.p_adjusted)


Node = Annotated[Union[SplitNode, LeafNode], Field(discriminator="kind")]
SplitNode.model_rebuild()


def make_leaf(n_small: int, n_large: int, labels: tuple[str, str]) -> LeafNode:
    """Leaf for the given counts; a frequency tie predicts the small class."""
    total = n_small + n_large
    if total <= 0:
        raise ValueError("a leaf needs at least one row")
    freqs = (n_small / total, n_large / total)
    predicted = labels[0] if n_small >= n_large else labels[1]
    return LeafNode(counts=(n_small, n_large), freqs=freqs, predicted=predicted)


class Tree(BaseModel):
    """A grown tree; `labels` is (small class, large class)."""

    model_config = ConfigDict(frozen=True)

    labels: tuple[str, str]
    root: Node

    def nodes(self) -> Iterator[Union[SplitNode, LeafNode]]:
        """Preorder traversal."""
        stack = [self.root]
        while stack:
            node = stack.pop()
            yield node
            if isinstance(node, SplitNode):
                stack.append(node.right)
                stack.append(node.left)

    def leaves(self) -> list[LeafNode]:
        return [n for n in self.nodes() if isinstance(n, LeafNode)]

    @property
    def is_root_only(self) -> bool:
        return isinstance(self.root, LeafNode)


def collect_splits(tree: Tree) -> list[Split]:
    """All inner-node splits in preorder."""
    return [node.split for node in tree.nodes() if isinstance(node, SplitNode)]


def tree_size(tree: Tree) -> tuple[int, int]:
    """(number of nodes, number of leaves)."""
    n_nodes = n_leaves = 0
    for node in tree.nodes():
        n_nodes += 1
        n_leaves += isinstance(node, LeafNode)
    return n_nodes, n_leaves


def first_split(tree: Tree) -> Optional[str]:
    """Variable of the root split, None for a root-only tree."""
    return tree.root.variable if isinstance(tree.root, SplitNode) else None
