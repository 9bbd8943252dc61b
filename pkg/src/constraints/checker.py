"""
Interpretability check of grown trees against exclusion rules.
"""
from typing import Sequence

from pydantic import BaseModel, ConfigDict, model_validator

from src.constraints.rules import ExclusionRule
from src.tree.models import CategoricalRule, Split, Tree, collect_splits


class Violation(BaseModel):
    model_config = ConfigDict(frozen=True)

    rule: ExclusionRule
    split: Split

    def describe(self) -> str:
        assert isinstance(self.split.rule, CategoricalRule)
        left = ", ".join(self.split.rule.left)
        right = ", ".join(self.split.rule.right)
        return f"{self.rule} violated by split {self.split.variable}: {{{left}}} | {{{right}}}"


class InterpretabilityVerdict(BaseModel):
    model_config = ConfigDict(frozen=True)

    interpretable: bool
    violations: tuple[Violation, ...] = ()

    @model_validator(mode="after")
    def _consistent(self) -> "InterpretabilityVerdict":
        if self.interpretable == bool(self.violations):
            raise ValueError("interpretable must hold exactly when there are no violations")
        return self


def split_violates(split: Split, rule: ExclusionRule) -> bool:
    """
    Whether one split breaks one rule.

    exact_set matches when its level set equals either branch. never_together
    matches when its levels observed at the node (at least two of them) all
    fall into the same branch. Numeric splits never match.
    """
    if split.variable != rule.variable or not isinstance(split.rule, CategoricalRule):
        return False
    left, right = frozenset(split.rule.left), frozenset(split.rule.right)
    if rule.kind == "exact_set":
        return rule.levels == left or rule.levels == right
    observed = rule.levels & (left | right)
    return len(observed) >= 2 and (observed <= left or observed <= right)


def check_tree(tree: Tree, rules: Sequence[ExclusionRule]) -> InterpretabilityVerdict:
    """Collect every (rule, split) violation of a tree."""
    violations = tuple(
        Violation(rule=rule, split=split)
        for split in collect_splits(tree)
        for rule in rules
        if split_violates(split, rule)
    )
    return InterpretabilityVerdict(interpretable=not violations, violations=violations)
