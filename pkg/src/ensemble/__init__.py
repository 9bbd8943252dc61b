from src.ensemble.ensemble import (
    Ensemble,
    EnsembleSelector,
    best_tree,
    build_ensemble,
    ensemble_accuracy,
    ensemble_predict,
    ensemble_predict_all,
    ensemble_predict_small,
)

__all__ = [
    "EnsembleSelector",
    "Ensemble",
    "build_ensemble",
    "best_tree",
    "ensemble_predict",
    "ensemble_predict_small",
    "ensemble_predict_all",
    "ensemble_accuracy",
]
