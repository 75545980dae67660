import numpy as np
import pytest

from stroke_classifier.errors import DegenerateClassError, EvaluationError
from stroke_classifier.evaluation import evaluate, roc_curves, roc_one_vs_rest

PAIRS = [(0, 0), (0, 1), (1, 1), (1, 1), (2, 2), (2, 0)]


def _pair_counting_auc(s: np.ndarray, positive: np.ndarray) -> float:
    pos = s[positive]
    neg = s[~positive]
    greater = (pos[:, None] > neg[None, :]).sum()
    ties = (pos[:, None] == neg[None, :]).sum()
    return (greater + 0.5 * ties) / (pos.size * neg.size)


class TestEvaluate:
    def test_three_class_example(self):
        report = evaluate(PAIRS, 3, ['na', 'tin', 'tun'])
        assert report.confusion.tolist() == [[1, 1, 0], [0, 2, 0], [1, 0, 1]]
        assert report.accuracy == pytest.approx(4 / 6)
        np.testing.assert_allclose(report.precision, [0.5, 2 / 3, 1.0])
        np.testing.assert_allclose(report.recall, [0.5, 1.0, 0.5])
        assert report.support.tolist() == [2, 2, 2]
        assert report.n_test == 6
        assert report.recall_of('tin') == 1.0

    def test_confusion_sums_to_test_size(self):
        rng = np.random.default_rng(3)
        pairs = rng.integers(0, 5, size=(137, 2))
        report = evaluate(map(tuple, pairs), 5)
        assert report.confusion.sum() == 137
        assert report.accuracy == pytest.approx(np.trace(report.confusion) / 137)
        assert report.class_names == ('0', '1', '2', '3', '4')

    def test_never_predicted_class_has_zero_precision(self):
        report = evaluate([(0, 0), (1, 0)], 3)
        assert report.precision.tolist() == [0.5, 0.0, 0.0]
        assert report.recall.tolist() == [1.0, 0.0, 0.0]

    def test_empty(self):
        with pytest.raises(EvaluationError):
            evaluate([], 3)

    def test_index_out_of_range(self):
        with pytest.raises(EvaluationError):
            evaluate([(0, 3)], 3)

    def test_unknown_class_name(self):
        with pytest.raises(EvaluationError):
            evaluate(PAIRS, 3).recall_of('ghe')


class TestRoc:
    def test_matches_pair_counting(self):
        rng = np.random.default_rng(17)
        for _ in range(200):
            n = int(rng.integers(4, 40))
            truths = rng.integers(0, 3, n)
            # 整数分数制造大量平局
            scores = rng.integers(0, 5, size=(n, 3)).astype(np.float64)
            for k in range(3):
                positive = truths == k
                if positive.all() or not positive.any():
                    continue
                roc = roc_one_vs_rest(scores, truths, k)
                assert roc.auc == pytest.approx(_pair_counting_auc(scores[:, k], positive), abs=1e-12)

    def test_curve_shape(self):
        rng = np.random.default_rng(4)
        scores = rng.uniform(size=(50, 2))
        truths = rng.integers(0, 2, 50)
        roc = roc_one_vs_rest(scores, truths, 1)
        assert tuple(roc.points[0]) == (0.0, 0.0)
        assert tuple(roc.points[-1]) == (1.0, 1.0)
        assert np.all(np.diff(roc.fpr) >= 0)
        assert np.all(np.diff(roc.tpr) >= 0)
        assert roc.thresholds[0] == np.inf
        assert len(roc.thresholds) == len(roc.points)

    def test_perfect_scores(self):
        scores = np.array([[0.9, 0.1], [0.8, 0.2], [0.3, 0.7], [0.1, 0.9]])
        roc = roc_one_vs_rest(scores, [0, 0, 1, 1], 0)
        assert roc.auc == 1.0
        assert [0.0, 1.0] in roc.points.tolist()

    def test_identical_scores(self):
        scores = np.full((6, 2), 0.5)
        roc = roc_one_vs_rest(scores, [0, 1, 0, 1, 1, 0], 1)
        assert roc.points.tolist() == [[0.0, 0.0], [1.0, 1.0]]
        assert roc.auc == 0.5

    def test_degenerate_class(self):
        scores = np.ones((3, 2))
        with pytest.raises(DegenerateClassError) as info:
            roc_one_vs_rest(scores, [0, 0, 0], 1)
        assert info.value.class_index == 1
        with pytest.raises(DegenerateClassError):
            roc_one_vs_rest(scores, [0, 0, 0], 0)

    def test_roc_curves_skips_absent_classes(self):
        scores = np.array([[0.7, 0.2, 0.1], [0.2, 0.7, 0.1], [0.6, 0.3, 0.1]])
        curves, skipped = roc_curves(scores, [0, 1, 0])
        assert [c.class_index for c in curves] == [0, 1]
        assert [k for k, _ in skipped] == [2]

    def test_shape_mismatch(self):
        with pytest.raises(EvaluationError):
            roc_one_vs_rest(np.ones((3, 2)), [0, 1], 0)
