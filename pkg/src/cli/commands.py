"""
Batch commands: train, predict, check and export.

Every command returns a process exit status. `train` renders all of its
outputs in memory before writing any file, so a failed run leaves the
output directory untouched.
"""
from pathlib import Path
from typing import Optional, Sequence, Union

from loguru import logger

from src.cli.config import RunConfig
from src.cli.outputs import (
    EnsembleRow,
    ensembles_csv,
    histogram_csv,
    histogram_stats_csv,
    predictions_csv,
    records_csv,
    report_text,
)
from src.constraints import check_tree, load_rules, unknown_variables
from src.core.errors import EmptyEnsembleError
from src.data import ClassSpec, class_counts, load_csv, load_features
from src.ensemble import EnsembleSelector, best_tree, build_ensemble, ensemble_accuracy, ensemble_predict_all
from src.evaluate import histogram, lower_median
from src.resample import run_prindt, sample_size
from src.resample.runner import TreeRecord
from src.storage import build_model, load_model
from src.tree import Tree, to_dot

PathLike = Union[str, Path]

# ensemble rows of the training summary, in output order
TRAIN_ENSEMBLES = (
    ("a", EnsembleSelector.top_k(3)),
    ("b", EnsembleSelector.all_interpretable()),
    ("c", EnsembleSelector.above_threshold()),
)


def _dot_name(rank: Optional[int], rep: int) -> str:
    prefix = f"best{rank}_" if rank is not None else ""
    return f"{prefix}tree_rep{rep:05d}.dot"


def _write_all(out: Path, files: dict[str, str]) -> None:
    out.mkdir(parents=True, exist_ok=True)
    for name, text in files.items():
        (out / name).write_text(text, encoding="utf-8")
    logger.info(f"Wrote {len(files)} files to {out}")


def _ensemble_rows(records: Sequence[TreeRecord], ds, median: float) -> list[EnsembleRow]:
    rows = []
    for name, selector in TRAIN_ENSEMBLES:
        try:
            e = build_ensemble(records, selector, median=median)
        except EmptyEnsembleError as err:
            logger.warning(f"Ensemble {name}: {err}")
            rows.append(EnsembleRow(name=name, selector=str(selector), n_trees=0))
            continue
        acc = ensemble_accuracy(e, ds)
        logger.info(f"Ensemble {name} ({selector}): {len(e)} trees, balanced accuracy {acc:.4f}")
        rows.append(
            EnsembleRow(name=name, selector=str(selector), n_trees=len(e), balanced_accuracy=acc, threshold=e.threshold)
        )
    return rows


def cmd_train(config: RunConfig) -> int:
    """
    Run the full procedure on a corpus and write its outputs.

    Writes records.csv, ensembles.csv, histogram.csv, histogram_stats.csv, model.json,
    report.txt and DOT files for the best interpretable trees to `config.out`.
    """
    ds = load_csv(config.data, ClassSpec(column=config.class_col, small_label=config.small_class))
    if config.predictors is not None:
        ds = ds.select(config.predictors)
    rules = load_rules(config.constraints) if config.constraints is not None else []
    unknown = unknown_variables(rules, ds.predictors)
    if unknown:
        logger.warning(f"Constraint rules name variables not in the data: {unknown}")

    tree_params = config.tree_params()
    res_params = config.resample_params()
    records = run_prindt(ds, tree_params, res_params, rules, n_jobs=config.n_jobs)

    accuracies = [r.balanced_accuracy for r in records]
    median = lower_median(accuracies)
    hist = histogram(accuracies, config.bins)
    ensembles = _ensemble_rows(records, ds, median)

    best: Optional[TreeRecord]
    try:
        best = best_tree(records)
        ranked = build_ensemble(records, EnsembleSelector.top_k(config.top_dot)).members if config.top_dot else ()
    except EmptyEnsembleError:
        best, ranked = None, ()
    counts = class_counts(ds)

    files = {
        "records.csv": records_csv(records),
        "ensembles.csv": ensembles_csv(ensembles),
        "histogram.csv": histogram_csv(hist),
        "histogram_stats.csv": histogram_stats_csv(hist),
        "model.json": build_model(ds.schema, ds.class_spec, tree_params, res_params, records).dump(),
        "report.txt": report_text(
            data=str(config.data),
            n_rows=ds.n_rows,
            labels=ds.class_spec.ordered_labels,
            counts=counts,
            fraction=res_params.fraction,
            train_large=min(sample_size(res_params.fraction, counts[1]), counts[1]),
            hist=hist,
            records=records,
            best=best,
            ensembles=ensembles,
        ),
    }
    for rank, record in enumerate(ranked, start=1):
        files[_dot_name(rank, record.rep_index)] = to_dot(record.tree, name=f"rep{record.rep_index}")
    _write_all(config.out, files)
    return 0


def cmd_predict(model_path: PathLike, data_path: PathLike, selector: EnsembleSelector, out_path: PathLike) -> int:
    """Predict the class of every row of `data_path` with an ensemble from a stored model."""
    model = load_model(model_path)
    frame, n_rows = load_features(data_path, model.schema_)
    e = build_ensemble(model.records(), selector, median=model.summary.median_balanced_accuracy)
    labels = ensemble_predict_all(e, frame, n_rows=n_rows)
    out_path = Path(out_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    out_path.write_text(predictions_csv(list(labels)), encoding="utf-8")
    logger.info(f"Predicted {n_rows} rows with {len(e)} trees ({selector}) into {out_path}")
    return 0


def cmd_check(model_path: PathLike, constraints_path: PathLike) -> int:
    """
    Re-check the stored trees against a rule file and print per-tree verdicts.

    Violations are reported, not treated as failures.
    """
    model = load_model(model_path)
    rules = load_rules(constraints_path)
    unknown = unknown_variables(rules, [v.name for v in model.schema_])
    if unknown:
        logger.warning(f"Constraint rules name variables not in the model: {unknown}")

    labels = model.class_spec.ordered_labels
    n_ok = 0
    for stored in model.trees:
        verdict = check_tree(Tree(labels=labels, root=stored.root), rules)
        if verdict.interpretable:
            n_ok += 1
            print(f"rep {stored.rep}: interpretable")
            continue
        print(f"rep {stored.rep}: {len(verdict.violations)} violation(s)")
        for violation in verdict.violations:
            print(f"  {violation.describe()}")
    print(f"{n_ok} of {len(model.trees)} trees interpretable")
    return 0


def cmd_export(model_path: PathLike, out_dir: PathLike, reps: Optional[Sequence[int]] = None) -> int:
    """Write DOT files for the chosen stored trees (all of them when `reps` is None)."""
    model = load_model(model_path)
    by_rep = {t.rep: t for t in model.trees}
    wanted = list(by_rep) if reps is None else list(reps)
    missing = [r for r in wanted if r not in by_rep]
    if missing:
        logger.error(f"Model has no stored tree for reps {missing}")
        return 1
    labels = model.class_spec.ordered_labels
    files = {_dot_name(None, r): to_dot(Tree(labels=labels, root=by_rep[r].root), name=f"rep{r}") for r in wanted}
    _write_all(Path(out_dir), files)
    return 0
