"""
Persistence of trained runs as model.json.

Layout:
{"schema": [...], "class_spec": {...}, "params": {"tree": {...}, "resample": {...}},
 "summary": {...}, "trees": [{"rep", "balanced_accuracy", "interpretable", "root"}]}
"""
from pathlib import Path
from typing import Sequence, Union

from loguru import logger
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from src.core.errors import ModelFileError
from src.data.models import ClassSpec, VariableSchema
from src.evaluate.metrics import lower_median
from src.resample.plan import ResampleParams
from src.resample.runner import TreeRecord
from src.tree.models import Node, Tree, TreeParams


class RunParams(BaseModel):
    model_config = ConfigDict(frozen=True)

    tree: TreeParams
    resample: ResampleParams


class RunSummary(BaseModel):
    model_config = ConfigDict(frozen=True)

    reps: int
    min_balanced_accuracy: float
    max_balanced_accuracy: float
    median_balanced_accuracy: float
    uninterpretable: int


class StoredTree(BaseModel):
    model_config = ConfigDict(frozen=True)

    rep: int
    balanced_accuracy: float
    interpretable: bool
    root: Node


class ModelFile(BaseModel):
    model_config = ConfigDict(frozen=True, populate_by_name=True)

    schema_: tuple[VariableSchema, ...] = Field(alias="schema")
    class_spec: ClassSpec
    params: RunParams
    summary: RunSummary
    trees: tuple[StoredTree, ...]

    def records(self) -> list[TreeRecord]:
        """Stored trees as repetition records, ordered by rep."""
        labels = self.class_spec.ordered_labels
        return [
            TreeRecord(
                rep_index=t.rep,
                tree=Tree(labels=labels, root=t.root),
                balanced_accuracy=t.balanced_accuracy,
                interpretable=t.interpretable,
            )
            for t in self.trees
        ]

    def dump(self) -> str:
        return self.model_dump_json(by_alias=True, indent=2) + "\n"


def summarize(records: Sequence[TreeRecord]) -> RunSummary:
    accuracies = [r.balanced_accuracy for r in records]
    return RunSummary(
        reps=len(records),
        min_balanced_accuracy=min(accuracies),
        max_balanced_accuracy=max(accuracies),
        median_balanced_accuracy=lower_median(accuracies),
        uninterpretable=sum(not r.interpretable for r in records),
    )


def build_model(
    schema: Sequence[VariableSchema],
    class_spec: ClassSpec,
    tree_params: TreeParams,
    res_params: ResampleParams,
    records: Sequence[TreeRecord],
) -> ModelFile:
    """Model file content for a run; only interpretable trees are kept."""
    trees = tuple(
        StoredTree(rep=r.rep_index, balanced_accuracy=r.balanced_accuracy, interpretable=True, root=r.tree.root)
        for r in records
        if r.interpretable
    )
    return ModelFile(
        schema_=tuple(schema),
        class_spec=class_spec,
        params=RunParams(tree=tree_params, resample=res_params),
        summary=summarize(records),
        trees=trees,
    )


def load_model(path: Union[str, Path]) -> ModelFile:
    """
    Read a model file.

    Raises:
        ModelFileError: the file is missing or does not match the layout
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise ModelFileError(f"cannot read model file {path}: {e}") from e
    try:
        model = ModelFile.model_validate_json(text)
    except ValidationError as e:
        raise ModelFileError(f"invalid model file {path}: {e}") from e
    logger.info(f"Loaded model {path}: {len(model.trees)} trees, {len(model.schema_)} predictors")
    return model
