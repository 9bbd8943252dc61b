from src.data.loader import class_counts, load_csv, load_features, write_csv
from src.data.models import ClassSpec, Dataset, VariableSchema

__all__ = [
    "ClassSpec",
    "Dataset",
    "VariableSchema",
    "load_csv",
    "load_features",
    "write_csv",
    "class_counts",
]
