"""
Undersampling plans: the whole small class plus a seeded random share of
the large class per repetition.

Seeds: repetition r of a run with master seed s draws from
`numpy.random.default_rng(SeedSequence(s, spawn_key=(r,)))`. SeedSequence
hashes (s, r) into an independent PCG64 state, so each repetition's stream
depends only on its own index and repetitions can run in any order.
"""
from decimal import Decimal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.core.utils import round_half_up
from src.data.models import Dataset

_MAX_SEED = 2**64 - 1


class ResampleParams(BaseModel):
    model_config = ConfigDict(frozen=True)

    fraction: float = Field(default=0.09, gt=0.0, le=1.0)
    reps: int = Field(default=1001, ge=1)
    master_seed: int = Field(ge=0, le=_MAX_SEED)


class RepetitionPlan(BaseModel):
    """Training and hold-out rows of one repetition."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    rep_index: int = Field(ge=0)
    train_rows: np.ndarray
    holdout_rows: np.ndarray

    @model_validator(mode="after")
    def _disjoint(self) -> "RepetitionPlan":
        if np.intersect1d(self.train_rows, self.holdout_rows).size:
            raise ValueError("train and holdout rows overlap")
        self.train_rows.flags.writeable = False
        self.holdout_rows.flags.writeable = False
        return self


def repetition_rng(master_seed: int, rep_index: int) -> np.random.Generator:
    """Random generator of one repetition, derived from (master_seed, rep_index)."""
    return np.random.default_rng(np.random.SeedSequence(master_seed, spawn_key=(rep_index,)))


def sample_size(fraction: float, n_large: int) -> int:
    """Number of large-class rows kept for training."""
    return round_half_up(Decimal(repr(float(fraction))) * n_large)


def partial_shuffle(indices: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    """First k entries of a Fisher-Yates shuffle of `indices` (copied)."""
    pool = np.array(indices, copy=True)
    n = len(pool)
    for i in range(k):
        j = int(rng.integers(i, n))
        pool[i], pool[j] = pool[j], pool[i]
    return pool[:k]


def undersample_plan(ds: Dataset, params: ResampleParams, rep_index: int) -> RepetitionPlan:
    """
    Build the plan of one repetition.

    Training rows are every small-class row plus round_half_up(fraction *
    N_large) large-class rows drawn without replacement; the remaining
    large-class rows form the hold-out. Both index lists are sorted.
    """
    if not 0 <= rep_index < params.reps:
        raise ValueError(f"rep_index {rep_index} outside [0, {params.reps})")
    small_rows = np.flatnonzero(ds.is_small)
    large_rows = np.flatnonzero(~ds.is_small)
    k = sample_size(params.fraction, len(large_rows))
    if k == 0:
        raise ValueError(
            f"fraction {params.fraction} of {len(large_rows)} large-class rows samples nothing"
        )
    k = min(k, len(large_rows))
    sampled = partial_shuffle(large_rows, k, repetition_rng(params.master_seed, rep_index))
    train = np.sort(np.concatenate([small_rows, sampled]))
    holdout = np.setdiff1d(large_rows, sampled, assume_unique=True)
    return RepetitionPlan(rep_index=rep_index, train_rows=train, holdout_rows=holdout)
