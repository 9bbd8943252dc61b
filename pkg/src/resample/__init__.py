from src.resample.plan import (
    RepetitionPlan,
    ResampleParams,
    partial_shuffle,
    repetition_rng,
    sample_size,
    undersample_plan,
)
from src.resample.runner import TreeRecord, run_prindt, run_repetition

__all__ = [
    "ResampleParams",
    "RepetitionPlan",
    "repetition_rng",
    "sample_size",
    "partial_shuffle",
    "undersample_plan",
    "TreeRecord",
    "run_repetition",
    "run_prindt",
]
