import numpy as np
import pytest

from stroke_classifier.dataset import Dataset
from stroke_classifier.errors import StrokeClassifierError
from stroke_classifier.learners import (
    Bins,
    TreeModel,
    TreeNode,
    TreeParams,
    accuracy,
    assign_bins,
    equal_frequency_edges,
    fit_id3,
    information_gain,
    predict,
)
from stroke_classifier.learners.cart import GAIN_TOLERANCE
from stroke_classifier.learners.impurity import ClassDistribution


def _leaf(counts) -> TreeNode:
    return TreeNode(ClassDistribution(counts), 0.0)


class TestEdges:
    def test_equal_frequency_on_uniform_values(self):
        edges = equal_frequency_edges(np.arange(100.0), 4)
        np.testing.assert_allclose(edges, [0.0, 24.75, 49.5, 74.25, 99.0])

    def test_binary_feature_gets_midpoint(self):
        edges = equal_frequency_edges(np.array([0.0, 0.0, 0.0, 1.0, 1.0]), 2)
        np.testing.assert_array_equal(edges, [0.0, 0.5, 1.0])

    def test_constant_feature_has_one_edge(self):
        assert equal_frequency_edges(np.full(10, 3.5), 8).tolist() == [3.5]

    def test_assign_bins_clamps_out_of_range(self):
        edges = np.array([0.0, 1.0, 2.0, 3.0])
        codes = assign_bins(np.array([-5.0, 0.0, 0.99, 1.0, 2.5, 3.0, 99.0]), edges)
        assert codes.tolist() == [0, 0, 0, 1, 2, 2, 2]

    def test_bins_rule_agrees_with_assign_bins(self):
        rule = Bins((0.0, 1.0, 2.0, 3.0))
        values = np.linspace(-1, 4, 41)
        assert [rule.branch(v) for v in values] == assign_bins(values, np.array(rule.edges)).tolist()

    def test_bins_must_ascend(self):
        with pytest.raises(StrokeClassifierError):
            Bins((1.0, 1.0))


class TestFitId3:
    def test_categorical_feature_single_split(self):
        rng = np.random.default_rng(1)
        category = np.repeat([0.0, 1.0, 2.0], 10)
        X = np.column_stack([category, rng.normal(size=30)])
        ds = Dataset(X, category.astype(np.int64), ('dha', 'dhin', 'tit'), ('kind', 'noise'))

        # 3 箱时边界落在 0.67 和 1.33，三个取值各占一箱
        model = fit_id3(ds, TreeParams(id3_bins=3))
        assert model.root.rule.n_branches == 3
        assert model.algorithm == 'id3'
        assert model.root.feature_index == 0
        assert model.depth == 1
        assert accuracy(model, ds) == 1.0

    def test_constant_features_give_leaf(self):
        ds = Dataset(np.ones((6, 2)), [0, 1, 0, 1, 1, 1], ('a', 'b'), ('f0', 'f1'))
        model = fit_id3(ds)
        assert model.root.is_leaf
        assert predict(model, [1.0, 1.0])[0] == 'b'

    def test_root_maximizes_information_gain(self):
        rng = np.random.default_rng(7)
        for _ in range(30):
            X = rng.normal(size=(40, 4))
            y = rng.integers(0, 3, 40)
            ds = Dataset(X, y, ('a', 'b', 'c'), ('f0', 'f1', 'f2', 'f3'))
            parent = np.bincount(y, minlength=3)

            best_f, best_gain = None, -1.0
            for f in range(4):
                edges = equal_frequency_edges(X[:, f], 4)
                codes = assign_bins(X[:, f], edges)
                children = [np.bincount(y[codes == b], minlength=3) for b in range(edges.size - 1)]
                gain = information_gain(parent, children)
                if gain > best_gain + GAIN_TOLERANCE:
                    best_f, best_gain = f, gain

            model = fit_id3(ds, TreeParams(id3_bins=4))
            assert model.root.feature_index == best_f
            assert model.root.gain == pytest.approx(best_gain)

    def test_features_not_reused_on_a_path(self, blobs):
        model = fit_id3(blobs, TreeParams(id3_bins=3))

        def _check(node, used):
            if node.is_leaf:
                return
            assert node.feature_index not in used
            for child in node.children:
                if child is not None:
                    _check(child, used | {node.feature_index})

        _check(model.root, frozenset())
        assert model.depth <= blobs.n_features

    def test_criterion_forced_to_info_gain(self, blobs):
        assert fit_id3(blobs, TreeParams(criterion='gini')).params.criterion == 'info_gain'

    def test_needs_two_bins(self, blobs):
        with pytest.raises(StrokeClassifierError):
            fit_id3(blobs, TreeParams(id3_bins=1))

    def test_max_depth(self, blobs):
        assert fit_id3(blobs, TreeParams(max_depth=1)).depth <= 1


class TestMultiwayRouting:
    def test_out_of_range_values_use_end_bins(self):
        root = TreeNode(ClassDistribution([3, 3]), 1.0, feature_index=0,
                        rule=Bins((0.0, 1.0, 2.0)), children=(_leaf([3, 0]), _leaf([0, 3])), gain=1.0)
        model = TreeModel(root, TreeParams(criterion='info_gain'), ('f0',), ('a', 'b'), 'id3')
        assert predict(model, [-10.0])[0] == 'a'
        assert predict(model, [10.0])[0] == 'b'

    def test_empty_bin_falls_back_to_largest_sibling(self):
        root = TreeNode(ClassDistribution([2, 5]), 0.86, feature_index=0,
                        rule=Bins((0.0, 1.0, 2.0, 3.0)),
                        children=(_leaf([2, 0]), None, _leaf([0, 5])), gain=0.86)
        model = TreeModel(root, TreeParams(criterion='info_gain'), ('f0',), ('a', 'b'), 'id3')
        assert root.fallback_index == 2
        assert predict(model, [1.5])[0] == 'b'
        assert predict(model, [0.5])[0] == 'a'
