import numpy as np
import pytest

from src.core.errors import UndefinedMetricError
from src.evaluate import (
    Prediction,
    balanced_accuracy,
    class_accuracies,
    histogram,
    lower_median,
    overall_accuracy,
    predict_dataset,
    prindt_accuracy,
)
from src.tree import Tree
from tests.fixtures.datasets import LABELS, LARGE, SMALL, build_dataset, categorical_node, leaf, numeric_node

pytestmark = pytest.mark.evaluate


def test_balanced_accuracy_by_hand(mixed_dataset):
    """Test per-class accuracies averaged over hand-made predictions."""
    # small rows are 0, 1, 2, 4, 8
    predicted = [SMALL, SMALL, LARGE, LARGE, SMALL, LARGE, LARGE, SMALL, LARGE, LARGE, LARGE, LARGE]
    preds = [Prediction(i, p) for i, p in enumerate(predicted)]

    assert balanced_accuracy(preds, mixed_dataset) == pytest.approx((3 / 5 + 6 / 7) / 2)
    assert overall_accuracy(preds, mixed_dataset) == pytest.approx(9 / 12)


def test_balanced_accuracy_needs_both_classes(mixed_dataset):
    preds = [Prediction(0, SMALL), Prediction(1, SMALL)]
    with pytest.raises(UndefinedMetricError):
        balanced_accuracy(preds, mixed_dataset)
    with pytest.raises(UndefinedMetricError):
        balanced_accuracy([], mixed_dataset)


def test_prediction_labels_are_checked(mixed_dataset):
    with pytest.raises(ValueError):
        overall_accuracy([Prediction(0, "maybe")], mixed_dataset)


def test_prindt_accuracy_depth_one_tree(mixed_dataset):
    """Test the hybrid score of a depth-1 tree against per-row routing by hand."""
    tree = Tree(labels=LABELS, root=categorical_node("ETH", ["E/a"], ["S/C", "I/C"], leaf(3, 1), leaf(2, 6)))

    # E/a rows 0-3 predicted small: small rows 0, 1, 2 right, large row 3 wrong
    assert prindt_accuracy(tree, mixed_dataset) == pytest.approx((3 / 5 + 6 / 7) / 2)


def test_prindt_accuracy_equals_balanced_accuracy_on_random_fixtures():
    rng = np.random.default_rng(123)
    for _ in range(100):
        n = int(rng.integers(10, 60))
        labels = [SMALL] * 3 + [LARGE] * 3 + list(rng.choice(LABELS, size=n - 6))
        ds = build_dataset(
            {"X": list(rng.choice(["a", "b", "c"], size=n)), "AGE": list(rng.normal(size=n))},
            labels,
            numeric=["AGE"],
            levels={"X": ["a", "b", "c"]},
        )
        leaves = [leaf(*((1, 0) if rng.random() < 0.5 else (0, 1))) for _ in range(3)]
        tree = Tree(
            labels=LABELS,
            root=categorical_node(
                "X", ["a"], ["b", "c"], leaves[0], numeric_node("AGE", float(rng.normal()), leaves[1], leaves[2])
            ),
        )
        expected = balanced_accuracy(predict_dataset(tree, ds), ds)
        assert prindt_accuracy(tree, ds) == pytest.approx(expected, abs=1e-12)


def test_balanced_accuracy_ignores_large_class_duplication(mixed_dataset):
    """Test that duplicating large-class rows moves overall accuracy but not balanced accuracy."""
    tree = Tree(labels=LABELS, root=categorical_node("ETH", ["E/a"], ["S/C", "I/C"], leaf(3, 1), leaf(2, 6)))
    large_rows = np.flatnonzero(~mixed_dataset.is_small)
    doubled = mixed_dataset.take(np.concatenate([np.arange(12), large_rows]))

    before, after = predict_dataset(tree, mixed_dataset), predict_dataset(tree, doubled)

    assert balanced_accuracy(after, doubled) == pytest.approx(balanced_accuracy(before, mixed_dataset), abs=1e-12)
    assert overall_accuracy(after, doubled) != pytest.approx(overall_accuracy(before, mixed_dataset))


def test_root_only_tree_scores_half(mixed_dataset):
    tree = Tree(labels=LABELS, root=leaf(5, 7))
    assert prindt_accuracy(tree, mixed_dataset) == 0.5


def test_class_accuracies_split_fit_and_holdout(mixed_dataset):
    tree = Tree(labels=LABELS, root=categorical_node("ETH", ["E/a"], ["S/C", "I/C"], leaf(3, 1), leaf(2, 6)))
    # training: every small row plus large rows 3 and 5; hold-out: the other large rows
    parts = class_accuracies(tree, mixed_dataset, [0, 1, 2, 3, 4, 5, 8], [6, 7, 9, 10, 11])

    assert parts.small_fit == pytest.approx(3 / 5)
    assert parts.large_fit == pytest.approx(1 / 2)
    assert parts.large_holdout == 1.0


def test_lower_median():
    assert lower_median([3.0, 1.0, 2.0]) == 2.0
    assert lower_median([4.0, 1.0, 3.0, 2.0]) == 2.0
    with pytest.raises(ValueError):
        lower_median([])


def test_histogram_bins_and_statistics():
    hist = histogram([0.0, 0.5, 1.0, 0.25], bins=2)

    assert [(b.low, b.high, b.count) for b in hist.bins] == [(0.0, 0.5, 2), (0.5, 1.0, 2)]
    assert (hist.min, hist.max, hist.median) == (0.0, 1.0, 0.25)
    assert sum(b.count for b in histogram(list(np.linspace(0.6, 0.8, 101)), bins=20).bins) == 101


def test_histogram_constant_values():
    hist = histogram([0.7, 0.7, 0.7], bins=20)

    assert len(hist.bins) == 1
    assert (hist.bins[0].low, hist.bins[0].high, hist.bins[0].count) == (0.7, 0.7, 3)


def test_histogram_argument_checks():
    with pytest.raises(ValueError):
        histogram([0.5], bins=0)
    with pytest.raises(ValueError):
        histogram([], bins=3)
