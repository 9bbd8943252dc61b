from src.core.config import Settings, get_settings
from src.core.errors import (
    DataIngestionError,
    DegenerateTableError,
    EmptyEnsembleError,
    ModelFileError,
    NoValidSplit,
    PrInDTError,
    RepetitionError,
    RuleParseError,
    SchemaMismatchError,
    UndefinedMetricError,
)

__all__ = [
    "Settings",
    "get_settings",
    "PrInDTError",
    "DataIngestionError",
    "DegenerateTableError",
    "UndefinedMetricError",
    "NoValidSplit",
    "RuleParseError",
    "EmptyEnsembleError",
    "RepetitionError",
    "SchemaMismatchError",
    "ModelFileError",
]
