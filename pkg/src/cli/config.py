"""
Per-run configuration assembled from command-line flags.
"""
from pathlib import Path
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from src.resample.plan import ResampleParams
from src.tree.models import TreeParams


class RunConfig(BaseModel):
    """Everything `train` needs; invariants mirror TreeParams and ResampleParams."""

    model_config = ConfigDict(frozen=True)

    data: Path
    class_col: str
    small_class: Optional[str] = None
    predictors: Optional[tuple[str, ...]] = None
    fraction: float = 0.09
    reps: int = 1001
    alpha: float = 0.01
    min_split: int = 20
    min_bucket: int = 7
    max_levels: int = 20
    constraints: Optional[Path] = None
    seed: int
    out: Path
    n_jobs: int = Field(default=1, ge=1)
    bins: int = Field(default=20, ge=1)
    top_dot: int = Field(default=3, ge=0)

    @field_validator("data")
    @classmethod
    def _data_exists(cls, v: Path) -> Path:
        if not v.is_file():
            raise ValueError(f"data file {v} does not exist")
        return v

    @field_validator("constraints")
    @classmethod
    def _constraints_exist(cls, v: Optional[Path]) -> Optional[Path]:
        if v is not None and not v.is_file():
            raise ValueError(f"constraints file {v} does not exist")
        return v

    @field_validator("out")
    @classmethod
    def _out_is_dir(cls, v: Path) -> Path:
        if v.exists() and not v.is_dir():
            raise ValueError(f"output path {v} exists and is not a directory")
        return v

    @model_validator(mode="after")
    def _check_params(self) -> "RunConfig":
        # surfaces parameter errors before any work starts
        self.tree_params()
        self.resample_params()
        return self

    def tree_params(self) -> TreeParams:
        return TreeParams(
            alpha=self.alpha,
            min_split=self.min_split,
            min_bucket=self.min_bucket,
            max_levels_for_split_search=self.max_levels,
        )

    def resample_params(self) -> ResampleParams:
        return ResampleParams(fraction=self.fraction, reps=self.reps, master_seed=self.seed)
