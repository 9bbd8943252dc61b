"""
The training loop: one tree per undersampling repetition, scored and audited.
"""
import sys
from typing import Optional, Sequence

import numpy as np
from joblib import Parallel, delayed
from loguru import logger
from pydantic import BaseModel, ConfigDict, Field

from src.constraints.checker import check_tree
from src.constraints.rules import ExclusionRule
from src.core.config import get_settings
from src.core.errors import PrInDTError, RepetitionError
from src.data.models import Dataset
from src.evaluate.metrics import class_accuracies, prindt_accuracy
from src.resample.plan import ResampleParams, undersample_plan
from src.tree.ctree import grow
from src.tree.models import Tree, TreeParams, first_split, tree_size


class TreeRecord(BaseModel):
    """Outcome of one repetition."""

    model_config = ConfigDict(frozen=True)

    rep_index: int = Field(ge=0)
    tree: Tree
    balanced_accuracy: float = Field(ge=0.0, le=1.0)
    interpretable: bool
    violations: int = Field(default=0, ge=0)
    small_accuracy: Optional[float] = None
    large_fit_accuracy: Optional[float] = None
    large_holdout_accuracy: Optional[float] = None

    @property
    def n_nodes(self) -> int:
        return tree_size(self.tree)[0]

    @property
    def n_leaves(self) -> int:
        return tree_size(self.tree)[1]

    @property
    def first_split(self) -> Optional[str]:
        return first_split(self.tree)


def run_repetition(
    ds: Dataset,
    tree_params: TreeParams,
    res_params: ResampleParams,
    rules: Sequence[ExclusionRule],
    rep_index: int,
) -> TreeRecord:
    """Plan, grow, score and audit one repetition."""
    try:
        plan = undersample_plan(ds, res_params, rep_index)
        tree = grow(ds, plan.train_rows, tree_params)
        parts = class_accuracies(tree, ds, plan.train_rows, plan.holdout_rows)
        verdict = check_tree(tree, rules)
        record = TreeRecord(
            rep_index=rep_index,
            tree=tree,
            balanced_accuracy=prindt_accuracy(tree, ds),
            interpretable=verdict.interpretable,
            violations=len(verdict.violations),
            small_accuracy=parts.small_fit,
            large_fit_accuracy=parts.large_fit,
            large_holdout_accuracy=parts.large_holdout,
        )
    except (PrInDTError, ValueError) as e:
        raise RepetitionError(rep_index, e) from e
    logger.debug(
        f"rep {rep_index}: {record.n_nodes} nodes, BA={record.balanced_accuracy:.4f}, "
        f"interpretable={record.interpretable}"
    )
    return record


def _run_in_worker(
    log_level: str,
    ds: Dataset,
    tree_params: TreeParams,
    res_params: ResampleParams,
    rules: Sequence[ExclusionRule],
    rep_index: int,
) -> TreeRecord:
    # worker processes start with loguru defaults
    logger.remove()
    logger.add(sys.stderr, level=log_level)
    return run_repetition(ds, tree_params, res_params, rules, rep_index)


def run_prindt(
    ds: Dataset,
    tree_params: TreeParams,
    res_params: ResampleParams,
    rules: Sequence[ExclusionRule],
    n_jobs: int = 1,
) -> list[TreeRecord]:
    """
    Run every undersampling repetition.

    Args:
        ds: full dataset
        tree_params: tree growth parameters
        res_params: fraction, number of repetitions and master seed
        rules: interpretability rules
        n_jobs: worker processes; results do not depend on it

    Returns:
        One TreeRecord per repetition, ordered by rep_index
    """
    rules = list(rules)
    logger.info(
        f"Running {res_params.reps} repetitions (fraction={res_params.fraction}, "
        f"alpha={tree_params.alpha}, seed={res_params.master_seed}, n_jobs={n_jobs})"
    )
    if n_jobs == 1:
        records = [run_repetition(ds, tree_params, res_params, rules, r) for r in range(res_params.reps)]
    else:
        level = get_settings().log_level
        records = Parallel(n_jobs=n_jobs)(
            delayed(_run_in_worker)(level, ds, tree_params, res_params, rules, r) for r in range(res_params.reps)
        )
    records.sort(key=lambda rec: rec.rep_index)
    accuracies = np.array([rec.balanced_accuracy for rec in records])
    n_bad = sum(not rec.interpretable for rec in records)
    logger.info(
        f"Finished {len(records)} repetitions: BA min={accuracies.min():.4f} "
        f"max={accuracies.max():.4f}, {n_bad} uninterpretable"
    )
    return records
