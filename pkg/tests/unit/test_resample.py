import numpy as np
import pytest
from pydantic import ValidationError

from src.constraints import parse_rules
from src.core.errors import RepetitionError
from src.data import Dataset, VariableSchema
from src.resample import (
    ResampleParams,
    partial_shuffle,
    repetition_rng,
    run_prindt,
    run_repetition,
    sample_size,
    undersample_plan,
)
from src.tree import TreeParams
from tests.fixtures.datasets import CLASS_SPEC, LARGE, SMALL, build_dataset

pytestmark = pytest.mark.resample


@pytest.fixture
def corpus_shaped() -> Dataset:
    """528 small and 5618 large rows with one uninformative column."""
    n_small, n_large = 528, 5618
    return Dataset.from_codes(
        [VariableSchema(name="AGE", kind="numeric")],
        CLASS_SPEC,
        {"AGE": np.zeros(n_small + n_large)},
        [True] * n_small + [False] * n_large,
    )


def test_sample_size_arithmetic():
    assert sample_size(0.09, 5618) == 506
    assert sample_size(0.5, 5) == 3
    assert sample_size(1.0, 7) == 7


@pytest.mark.parametrize("fraction,n_large,expected", [(0.145, 100, 15), (0.575, 100, 58), (0.285, 100, 29)])
def test_sample_size_rounds_exact_halves_up(fraction, n_large, expected):
    # the binary float products land just below .5
    assert sample_size(fraction, n_large) == expected


def test_undersample_plan_sizes(corpus_shaped):
    """Test the 528 + 506 training rows and 5112 hold-out rows of one repetition."""
    plan = undersample_plan(corpus_shaped, ResampleParams(master_seed=11), rep_index=0)

    assert len(plan.train_rows) == 1034
    assert len(plan.holdout_rows) == 5112
    assert np.all(np.diff(plan.train_rows) > 0)
    assert np.all(np.diff(plan.holdout_rows) > 0)
    assert corpus_shaped.is_small[plan.train_rows].sum() == 528
    assert not corpus_shaped.is_small[plan.holdout_rows].any()
    assert np.intersect1d(plan.train_rows, plan.holdout_rows).size == 0
    large = np.flatnonzero(~corpus_shaped.is_small)
    assert np.array_equal(np.union1d(plan.train_rows[~corpus_shaped.is_small[plan.train_rows]], plan.holdout_rows), large)


def test_undersample_plan_is_reproducible(corpus_shaped):
    params = ResampleParams(master_seed=2024, reps=3)

    first = undersample_plan(corpus_shaped, params, 1)
    again = undersample_plan(corpus_shaped, params, 1)
    other = undersample_plan(corpus_shaped, params, 2)

    assert np.array_equal(first.train_rows, again.train_rows)
    assert not np.array_equal(first.train_rows, other.train_rows)


def test_undersample_plan_argument_checks(corpus_shaped):
    with pytest.raises(ValueError):
        undersample_plan(corpus_shaped, ResampleParams(master_seed=1, reps=2), rep_index=2)
    with pytest.raises(ValueError, match="samples nothing"):
        undersample_plan(corpus_shaped, ResampleParams(master_seed=1, fraction=1e-5), rep_index=0)


def test_resample_params_validation():
    with pytest.raises(ValidationError):
        ResampleParams(master_seed=1, fraction=0.0)
    with pytest.raises(ValidationError):
        ResampleParams(master_seed=1, reps=0)
    with pytest.raises(ValidationError):
        ResampleParams(master_seed=-1)
    with pytest.raises(ValidationError):
        ResampleParams()


def test_repetition_rng_streams_are_independent_of_order():
    a = repetition_rng(5, 3).integers(0, 1_000_000, size=4)
    repetition_rng(5, 0).integers(0, 10, size=100)
    b = repetition_rng(5, 3).integers(0, 1_000_000, size=4)
    assert np.array_equal(a, b)


def test_partial_shuffle_draws_without_replacement():
    pool = np.arange(100, 200)

    picked = partial_shuffle(pool, 30, np.random.default_rng(0))

    assert len(picked) == 30
    assert len(set(picked.tolist())) == 30
    assert set(picked.tolist()) <= set(pool.tolist())
    assert np.array_equal(pool, np.arange(100, 200))


def test_run_repetition_records_parts(separable_dataset):
    """Test that a repetition on separable data scores perfectly in every part."""
    params = ResampleParams(master_seed=3, fraction=0.5, reps=2)

    record = run_repetition(separable_dataset, TreeParams(), params, [], rep_index=1)

    assert record.rep_index == 1
    assert record.balanced_accuracy == 1.0
    assert record.interpretable
    assert record.violations == 0
    assert record.first_split == "X"
    assert (record.n_nodes, record.n_leaves) == (3, 2)
    assert record.small_accuracy == 1.0
    assert record.large_fit_accuracy == 1.0
    assert record.large_holdout_accuracy == 1.0


def test_run_repetition_flags_rule_violations(separable_dataset):
    rules = parse_rules("X == {a}")
    record = run_repetition(separable_dataset, TreeParams(), ResampleParams(master_seed=3, fraction=0.5), rules, 0)

    assert not record.interpretable
    assert record.violations == 1


def test_run_repetition_wraps_errors(separable_dataset, mocker):
    mocker.patch("src.resample.runner.grow", side_effect=ValueError("boom"))

    with pytest.raises(RepetitionError) as excinfo:
        run_repetition(separable_dataset, TreeParams(), ResampleParams(master_seed=3, fraction=0.5), [], 0)
    assert excinfo.value.rep_index == 0
    assert "boom" in str(excinfo.value)


def test_run_prindt_orders_records(separable_dataset):
    records = run_prindt(separable_dataset, TreeParams(), ResampleParams(master_seed=9, fraction=0.5, reps=4), [])

    assert [r.rep_index for r in records] == [0, 1, 2, 3]
    assert all(r.balanced_accuracy == 1.0 for r in records)


@pytest.mark.slow
def test_run_prindt_parallel_matches_serial(mixed_dataset):
    """Test that worker processes reproduce the serial records exactly."""
    tree_params = TreeParams(min_split=4, min_bucket=2, alpha=0.5)
    res_params = ResampleParams(master_seed=77, fraction=0.6, reps=6)

    serial = run_prindt(mixed_dataset, tree_params, res_params, [], n_jobs=1)
    parallel = run_prindt(mixed_dataset, tree_params, res_params, [], n_jobs=2)

    assert serial == parallel


def test_repetitions_draw_different_subsets():
    """Test that 10 repetitions on 1000 rows do not all reuse one training subset."""
    labels = [SMALL] * 100 + [LARGE] * 900
    ds = build_dataset({"AGE": [i % 13 for i in range(1000)]}, labels, numeric=["AGE"])
    params = ResampleParams(master_seed=31, fraction=0.1, reps=10)

    subsets = {tuple(undersample_plan(ds, params, rep).train_rows.tolist()) for rep in range(10)}

    assert len(subsets) >= 2


@pytest.mark.slow
def test_noise_predictors_score_chance_level():
    """Test that the mean balanced accuracy over 200 repetitions on pure noise stays near 0.5."""
    columns = {"ETH": [], "AGE": []}
    labels = []
    for label, n in ((SMALL, 100), (LARGE, 1000)):
        for i in range(n):
            columns["ETH"].append(["E/a", "S/C", "I/C", "S/M"][i % 4])
            columns["AGE"].append(30 + i % 10)
            labels.append(label)
    ds = build_dataset(columns, labels, numeric=["AGE"])

    records = run_prindt(ds, TreeParams(), ResampleParams(master_seed=8, fraction=0.1, reps=200), [])

    assert len(records) == 200
    assert abs(np.mean([r.balanced_accuracy for r in records]) - 0.5) <= 0.05
