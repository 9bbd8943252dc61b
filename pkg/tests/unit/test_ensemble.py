import numpy as np
import pytest
from pydantic import ValidationError

from src.core.errors import EmptyEnsembleError
from src.ensemble import (
    Ensemble,
    EnsembleSelector,
    best_tree,
    build_ensemble,
    ensemble_accuracy,
    ensemble_predict,
    ensemble_predict_all,
)
from src.resample import TreeRecord
from src.tree import Tree, predict
from tests.fixtures.datasets import LABELS, LARGE, SMALL, build_dataset, categorical_node, leaf, numeric_node

pytestmark = pytest.mark.ensemble

ALWAYS_SMALL = Tree(labels=LABELS, root=leaf(1, 0))
ALWAYS_LARGE = Tree(labels=LABELS, root=leaf(0, 1))


def record(rep, ba, interpretable=True, tree=ALWAYS_SMALL):
    return TreeRecord(rep_index=rep, tree=tree, balanced_accuracy=ba, interpretable=interpretable)


@pytest.fixture
def records():
    return [
        record(0, 0.60),
        record(1, 0.72, interpretable=False),
        record(2, 0.70),
        record(3, 0.65),
        record(4, 0.70),
        record(5, 0.55),
    ]


@pytest.mark.parametrize(
    "text,expected",
    [
        ("top:3", EnsembleSelector.top_k(3)),
        ("all", EnsembleSelector.all_interpretable()),
        ("above", EnsembleSelector.above_threshold()),
        ("above:0.69", EnsembleSelector.above_threshold(0.69)),
        ("TOP_K:1", EnsembleSelector.top_k(1)),
    ],
)
def test_selector_parse(text, expected):
    assert EnsembleSelector.parse(text) == expected


@pytest.mark.parametrize("text", ["top", "top:0", "best", "all:2", "above:x", "above:1.5"])
def test_selector_parse_rejects(text):
    with pytest.raises(ValueError):
        EnsembleSelector.parse(text)


def test_selector_argument_checks():
    with pytest.raises(ValidationError):
        EnsembleSelector(kind="top_k")
    with pytest.raises(ValidationError):
        EnsembleSelector(kind="all_interpretable", k=3)


def test_top_k_orders_by_accuracy_then_rep(records):
    """Test that the uninterpretable best tree is skipped and ties keep the lower rep first."""
    e = build_ensemble(records, EnsembleSelector.top_k(3))

    assert [m.rep_index for m in e.members] == [2, 4, 3]
    assert best_tree(records).rep_index == 2


def test_top_k_beyond_pool_equals_all_interpretable(records):
    everything = build_ensemble(records, EnsembleSelector.all_interpretable())
    top = build_ensemble(records, EnsembleSelector.top_k(1000))

    assert {m.rep_index for m in top.members} == {m.rep_index for m in everything.members} == {0, 2, 3, 4, 5}


def test_above_threshold_defaults_to_median(records):
    """Test the strict cut at the lower median over all repetitions."""
    e = build_ensemble(records, EnsembleSelector.above_threshold())

    # sorted accuracies 0.55 0.60 0.65 0.70 0.70 0.72: lower median 0.65
    assert e.threshold == 0.65
    assert sorted(m.rep_index for m in e.members) == [2, 4]
    assert build_ensemble(records, EnsembleSelector.above_threshold(), median=0.58).threshold == 0.58


def test_above_threshold_is_monotone(records):
    sizes = []
    for c in (0.0, 0.56, 0.6, 0.68, 0.7):
        try:
            sizes.append(len(build_ensemble(records, EnsembleSelector.above_threshold(c))))
        except EmptyEnsembleError:
            sizes.append(0)
    assert sizes == sorted(sizes, reverse=True)
    assert sizes == [5, 4, 3, 2, 0]


def test_empty_ensemble_reports_chain(records):
    with pytest.raises(EmptyEnsembleError) as excinfo:
        build_ensemble(records, EnsembleSelector.above_threshold(0.9))
    assert "6 records" in str(excinfo.value)
    assert "5 interpretable" in str(excinfo.value)

    with pytest.raises(EmptyEnsembleError):
        build_ensemble([record(0, 0.7, interpretable=False)], EnsembleSelector.all_interpretable())


def test_ensemble_members_must_be_interpretable():
    with pytest.raises(ValidationError):
        Ensemble(members=(record(0, 0.7, interpretable=False),), selector=EnsembleSelector.all_interpretable())


def test_vote_tie_goes_to_small_class():
    e = build_ensemble(
        [record(0, 0.6, tree=ALWAYS_SMALL), record(1, 0.6, tree=ALWAYS_LARGE)],
        EnsembleSelector.all_interpretable(),
    )
    assert ensemble_predict(e, {}) == SMALL


def test_majority_vote(stump_tree):
    e = build_ensemble(
        [record(0, 0.9, tree=stump_tree), record(1, 0.5, tree=ALWAYS_LARGE), record(2, 0.8, tree=stump_tree)],
        EnsembleSelector.all_interpretable(),
    )
    assert ensemble_predict(e, {"X": "a"}) == SMALL
    assert ensemble_predict(e, {"X": "b"}) == LARGE


def random_tree(rng) -> Tree:
    def random_leaf():
        return leaf(1, 0) if rng.random() < 0.5 else leaf(0, 1)

    def random_node(depth):
        if depth == 2 or rng.random() < 0.3:
            return random_leaf()
        if rng.random() < 0.5:
            levels = ["a", "b", "c"]
            k = int(rng.integers(1, 3))
            return categorical_node("X", levels[:k], levels[k:], random_node(depth + 1), random_node(depth + 1))
        return numeric_node("AGE", float(rng.uniform(0, 10)), random_node(depth + 1), random_node(depth + 1))

    return Tree(labels=LABELS, root=random_node(0))


def test_vectorised_vote_matches_brute_force_count():
    """Test 200 random odd ensembles of shallow trees against a per-row vote tally."""
    rng = np.random.default_rng(99)
    n = 50
    frame = {
        "X": rng.choice(["a", "b", "c", "d"], size=n).astype(object),
        "AGE": rng.uniform(0, 10, size=n),
    }
    for _ in range(200):
        size = int(rng.choice([1, 3, 5, 7]))
        members = [record(i, 0.6, tree=random_tree(rng)) for i in range(size)]
        e = build_ensemble(members, EnsembleSelector.all_interpretable())

        voted = ensemble_predict_all(e, frame)

        for i in range(n):
            row = {"X": frame["X"][i], "AGE": frame["AGE"][i]}
            small_votes = sum(predict(m.tree, row)[0] == SMALL for m in members)
            expected = SMALL if small_votes > size / 2 else LARGE
            assert voted[i] == expected
            assert ensemble_predict(e, row) == expected


def test_vote_is_member_order_invariant(stump_tree):
    members = [record(0, 0.7, tree=stump_tree), record(1, 0.7, tree=ALWAYS_LARGE), record(2, 0.7, tree=ALWAYS_SMALL)]
    forward = build_ensemble(members, EnsembleSelector.all_interpretable())
    backward = build_ensemble(members[::-1], EnsembleSelector.all_interpretable())
    for x in ("a", "b", "z"):
        assert ensemble_predict(forward, {"X": x}) == ensemble_predict(backward, {"X": x})


def test_ensemble_accuracy(stump_tree, separable_dataset):
    e = build_ensemble([record(0, 1.0, tree=stump_tree)], EnsembleSelector.top_k(3))
    assert ensemble_accuracy(e, separable_dataset) == 1.0


def test_ensemble_accuracy_with_mixed_members():
    split = Tree(labels=LABELS, root=categorical_node("ETH", ["E/a"], ["S/C", "I/C"], leaf(3, 1), leaf(2, 6)))
    e = build_ensemble(
        [record(0, 0.7, tree=split), record(1, 0.5, tree=ALWAYS_LARGE), record(2, 0.7, tree=split)],
        EnsembleSelector.all_interpretable(),
    )
    ds = build_dataset({"ETH": ["E/a", "S/C"]}, [SMALL, LARGE])
    assert ensemble_accuracy(e, ds) == 1.0
