"""
Exception hierarchy shared by all PrInDT modules.
"""
from typing import Optional


class PrInDTError(Exception):
    """Base class for all domain errors raised by the package."""


class DataIngestionError(PrInDTError):
    """A CSV corpus could not be turned into a valid Dataset."""

    def __init__(self, message: str, row: Optional[int] = None, column: Optional[str] = None):
        self.row = row
        self.column = column
        where = []
        if row is not None:
            where.append(f"row {row}")
        if column is not None:
            where.append(f"column '{column}'")
        super().__init__(f"{message} ({', '.join(where)})" if where else message)


class DegenerateTableError(PrInDTError):
    """A contingency table has an empty row or column margin."""


class UndefinedMetricError(PrInDTError):
    """A metric was requested on predictions that cannot define it."""


class NoValidSplit(PrInDTError):
    """No split candidate satisfies the minimum bucket size; the node becomes a leaf."""


class RuleParseError(PrInDTError):
    """A line of an interpretability rule file is malformed."""

    def __init__(self, message: str, line: int):
        self.line = line
        super().__init__(f"line {line}: {message}")


class EmptyEnsembleError(PrInDTError):
    """An ensemble selector kept no trees."""

    def __init__(self, selector: str, chain: list[str]):
        self.selector = selector
        self.chain = chain
        super().__init__(f"ensemble '{selector}' is empty: {' -> '.join(chain)}")


class RepetitionError(PrInDTError):
    """A single undersampling repetition failed."""

    def __init__(self, rep_index: int, cause: Exception):
        self.rep_index = rep_index
        self.cause = cause
        super().__init__(f"repetition {rep_index} failed: {cause}")


class SchemaMismatchError(PrInDTError):
    """New data does not conform to the schema stored in a model file."""

    def __init__(self, message: str, column: str):
        self.column = column
        super().__init__(f"column '{column}': {message}")


class ModelFileError(PrInDTError):
    """A model file is missing or cannot be decoded."""
