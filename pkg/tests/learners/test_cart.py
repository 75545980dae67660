from typing import Optional, Tuple

import numpy as np
import pytest

from stroke_classifier.dataset import Dataset
from stroke_classifier.errors import ArityMismatchError, EmptyTrainingSetError, StrokeClassifierError
from stroke_classifier.learners import (
    TreeModel,
    TreeNode,
    TreeParams,
    accuracy,
    best_binary_split,
    entropy,
    fit_cart,
    gini_impurity,
    predict,
)
from stroke_classifier.learners.cart import GAIN_TOLERANCE
from stroke_classifier.learners.impurity import ClassDistribution


def _oracle_split(X: np.ndarray, y: np.ndarray, n_classes: int,
                  criterion: str) -> Optional[Tuple[int, float]]:
    """逐个候选阈值直接计算不纯度下降"""
    measure = gini_impurity if criterion == 'gini' else entropy
    parent = measure(np.bincount(y, minlength=n_classes))
    candidates = []
    for f in range(X.shape[1]):
        values = np.unique(X[:, f])
        for lo, hi in zip(values[:-1], values[1:]):
            t = (lo + hi) / 2.0
            if t >= hi:
                t = lo
            left = y[X[:, f] <= t]
            right = y[X[:, f] > t]
            weighted = (
                left.size * measure(np.bincount(left, minlength=n_classes))
                + right.size * measure(np.bincount(right, minlength=n_classes))
            ) / y.size
            candidates.append((f, float(t), parent - weighted))
    if not candidates:
        return None
    best = max(gain for _, _, gain in candidates)
    if best <= GAIN_TOLERANCE:
        return None
    for f, t, gain in candidates:
        if gain >= best - GAIN_TOLERANCE:
            return f, t
    return None


class TestBestBinarySplit:
    def test_two_values(self):
        split = best_binary_split(np.array([[1.0], [2.0]]), np.array([0, 1]))
        assert split.feature_index == 0
        assert split.threshold == 1.5
        assert split.gain == pytest.approx(0.5)

    def test_identical_rows_have_no_split(self):
        X = np.ones((6, 3))
        assert best_binary_split(X, np.array([0, 1, 0, 1, 0, 1])) is None

    def test_pure_node_has_no_split(self):
        X = np.arange(8.0).reshape(4, 2)
        assert best_binary_split(X, np.array([1, 1, 1, 1]), n_classes=2) is None

    def test_adjacent_floats(self):
        lo = 1.0
        hi = float(np.nextafter(lo, 2.0))
        split = best_binary_split(np.array([[lo], [hi]]), np.array([0, 1]))
        assert lo <= split.threshold < hi

    def test_feature_indices_restrict_search(self):
        X = np.column_stack([np.arange(6.0), np.array([0, 0, 0, 1, 1, 1.0])])
        y = np.array([0, 0, 0, 1, 1, 1])
        # 两个特征同样好，平局取下标小的
        assert best_binary_split(X, y).feature_index == 0
        assert best_binary_split(X, y, feature_indices=[1]).feature_index == 1

    def test_min_leaf_excludes_small_sides(self):
        X = np.arange(5.0)[:, None]
        y = np.array([1, 0, 0, 0, 0])
        assert best_binary_split(X, y, min_leaf=1).threshold == 0.5
        assert best_binary_split(X, y, min_leaf=2).threshold == 1.5

    @pytest.mark.parametrize('criterion', ['gini', 'entropy'])
    def test_matches_exhaustive_search(self, criterion):
        rng = np.random.default_rng(2024)
        for _ in range(250):
            n = int(rng.integers(2, 51))
            n_features = int(rng.integers(1, 6))
            n_classes = int(rng.integers(2, 4))
            # 整数列制造重复取值，正态列几乎没有
            X = np.column_stack([
                rng.integers(0, 4, n).astype(np.float64) if f % 2 == 0 else rng.normal(size=n)
                for f in range(n_features)
            ])
            y = rng.integers(0, n_classes, n)
            split = best_binary_split(X, y, criterion=criterion, n_classes=n_classes)
            expected = _oracle_split(X, y, n_classes, criterion)
            if expected is None:
                assert split is None
            else:
                assert (split.feature_index, split.threshold) == expected


class TestFitCart:
    def test_separable_data(self, separable):
        model = fit_cart(separable)
        assert model.algorithm == 'cart'
        assert model.depth == 1
        assert model.root.feature_index == 0
        assert model.root.rule.t == pytest.approx(4.75)
        assert accuracy(model, separable) == 1.0

    def test_depth_zero_is_majority_leaf(self, blobs):
        model = fit_cart(blobs, TreeParams(max_depth=0))
        assert model.root.is_leaf
        assert model.n_nodes == 1

    def test_depth_limit(self, blobs):
        assert fit_cart(blobs, TreeParams(max_depth=2)).depth <= 2

    def test_min_leaf_respected(self, blobs):
        model = fit_cart(blobs, TreeParams(min_leaf=7))
        assert all(node.n_samples >= 7 for node in model.root.walk())

    def test_memorizes_distinct_rows(self):
        rng = np.random.default_rng(6)
        X = rng.normal(size=(60, 4))
        y = rng.integers(0, 3, 60)
        ds = Dataset(X, y, ('a', 'b', 'c'), ('f0', 'f1', 'f2', 'f3'))
        for criterion in ('gini', 'entropy'):
            assert accuracy(fit_cart(ds, TreeParams(criterion=criterion)), ds) == 1.0

    def test_monotone_rescaling_keeps_predictions(self, blobs):
        scaled = Dataset(blobs.X * 2.0 + 3.0, blobs.y, blobs.class_names, blobs.feature_names)
        a = fit_cart(blobs)
        b = fit_cart(scaled)
        assert a.n_nodes == b.n_nodes
        assert np.array_equal(a.predict_indices(blobs.X), b.predict_indices(scaled.X))

    def test_min_gain_stops_growth(self, blobs):
        assert fit_cart(blobs, TreeParams(min_gain=1.0)).root.is_leaf

    def test_internal_nodes_have_positive_gain(self, blobs):
        model = fit_cart(blobs, TreeParams(criterion='entropy'))
        for node in model.root.walk():
            if not node.is_leaf:
                assert node.gain > 0
                assert len(node.children) == 2
                assert sum(c.n_samples for c in node.children) == node.n_samples

    def test_rejects_info_gain(self, blobs):
        with pytest.raises(StrokeClassifierError):
            fit_cart(blobs, TreeParams(criterion='info_gain'))

    def test_rejects_empty_training_set(self):
        empty = Dataset(np.empty((0, 2)), [], ('a', 'b'), ('f0', 'f1'))
        with pytest.raises(EmptyTrainingSetError):
            fit_cart(empty)

    @pytest.mark.parametrize('kwargs', [dict(max_depth=-1), dict(min_leaf=0), dict(criterion='chi2')])
    def test_invalid_params(self, blobs, kwargs):
        with pytest.raises(StrokeClassifierError):
            fit_cart(blobs, TreeParams(**kwargs))


class TestPredict:
    def _leaf_model(self) -> TreeModel:
        leaf = TreeNode(ClassDistribution([3, 1]), 0.375)
        return TreeModel(leaf, TreeParams(), ('f0', 'f1'), ('a', 'b'))

    def test_leaf_distribution(self):
        name, probs = predict(self._leaf_model(), [0.0, 0.0])
        assert name == 'a'
        np.testing.assert_allclose(probs, [0.75, 0.25])

    def test_arity_mismatch(self):
        with pytest.raises(ArityMismatchError):
            predict(self._leaf_model(), [1.0, 2.0, 3.0])

    def test_threshold_routing_is_inclusive(self, separable):
        model = fit_cart(separable)
        t = model.root.rule.t
        assert predict(model, [t, 0.0])[0] == 'a'
        assert predict(model, [np.nextafter(t, np.inf), 0.0])[0] == 'b'

    def test_accepts_feature_vector(self, separable):
        model = fit_cart(separable)
        for row in separable.rows:
            assert predict(model, row)[0] == row.label
