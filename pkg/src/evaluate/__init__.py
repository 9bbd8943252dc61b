from src.evaluate.metrics import (
    ClassAccuracies,
    Histogram,
    HistogramBin,
    Prediction,
    balanced_accuracy,
    balanced_accuracy_arrays,
    class_accuracies,
    histogram,
    lower_median,
    overall_accuracy,
    predict_dataset,
    prindt_accuracy,
)

__all__ = [
    "Prediction",
    "overall_accuracy",
    "balanced_accuracy",
    "balanced_accuracy_arrays",
    "predict_dataset",
    "prindt_accuracy",
    "ClassAccuracies",
    "class_accuracies",
    "Histogram",
    "HistogramBin",
    "histogram",
    "lower_median",
]
