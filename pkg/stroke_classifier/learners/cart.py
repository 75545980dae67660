"""
CART - 二分决策树 (gini / entropy)

候选阈值为排序后相邻不同取值的中点。最优划分取不纯度下降最大者，
下降量在 GAIN_TOLERANCE 内视为相等，此时依次取特征下标最小、阈值最小者。
"""

from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from ..dataset.table import Dataset
from ..errors import EmptyTrainingSetError, StrokeClassifierError
from .impurity import impurity_of_counts
from .tree import Threshold, TreeModel, TreeNode, TreeParams, make_leaf

GAIN_TOLERANCE = 1e-12

# 每个节点调用一次，返回本节点的候选特征下标
FeatureSampler = Callable[[], Sequence[int]]


@dataclass(frozen=True)
class Split:
    """一次二分划分"""
    feature_index: int
    threshold: float
    gain: float


def _feature_gains(
    column: np.ndarray,
    onehot: np.ndarray,
    parent_impurity: float,
    criterion: str,
    min_leaf: int
) -> Tuple[np.ndarray, np.ndarray]:
    """
    单个特征所有候选阈值的不纯度下降

    Returns:
        (gains, thresholds)，不合法的位置 gain 为 -inf
    """
    n = column.shape[0]
    order = np.argsort(column, kind='stable')
    xs = column[order]
    left = np.cumsum(onehot[order], axis=0)[:-1]
    right = onehot.sum(axis=0) - left

    n_left = np.arange(1, n, dtype=np.float64)
    n_right = n - n_left
    weighted = (
        n_left * impurity_of_counts(left, criterion)
        + n_right * impurity_of_counts(right, criterion)
    ) / n
    gains = parent_impurity - weighted

    valid = (xs[:-1] < xs[1:]) & (n_left >= min_leaf) & (n_right >= min_leaf)
    gains = np.where(valid, gains, -np.inf)

    lower, upper = xs[:-1], xs[1:]
    thresholds = (lower + upper) / 2.0
    # 相邻浮点数的中点可能舍入到上界，此时用下界以保持 <= 路由
    thresholds = np.where(thresholds >= upper, lower, thresholds)
    return gains, thresholds


def best_binary_split(
    X: np.ndarray,
    y: np.ndarray,
    feature_indices: Optional[Sequence[int]] = None,
    criterion: str = 'gini',
    n_classes: Optional[int] = None,
    min_leaf: int = 1
) -> Optional[Split]:
    """
    搜索最优二分划分

    Args:
        X: (n, F) 特征矩阵
        y: (n,) 类别下标
        feature_indices: 候选特征，默认全部
        criterion: gini / entropy
        n_classes: 类别数，默认 max(y) + 1
        min_leaf: 每侧最少样本数

    Returns:
        最优划分；没有正的不纯度下降时返回 None
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    n = y.shape[0]
    if n < 2:
        return None
    if n_classes is None:
        n_classes = int(y.max()) + 1
    if feature_indices is None:
        feature_indices = range(X.shape[1])
    features = sorted(set(int(f) for f in feature_indices))

    onehot = np.zeros((n, n_classes))
    onehot[np.arange(n), y] = 1.0
    parent = float(impurity_of_counts(onehot.sum(axis=0)[None, :], criterion)[0])

    scored = []
    best_gain = -np.inf
    for f in features:
        gains, thresholds = _feature_gains(X[:, f], onehot, parent, criterion, min_leaf)
        scored.append((f, gains, thresholds))
        if gains.size:
            best_gain = max(best_gain, float(gains.max()))

    if best_gain <= GAIN_TOLERANCE:
        return None

    for f, gains, thresholds in scored:
        hits = np.flatnonzero(gains >= best_gain - GAIN_TOLERANCE)
        if hits.size:
            # 阈值随位置单调递增，第一个命中即最小阈值
            i = int(hits[0])
            return Split(f, float(thresholds[i]), float(gains[i]))
    return None


def grow_binary_tree(
    X: np.ndarray,
    y: np.ndarray,
    n_classes: int,
    params: TreeParams,
    feature_sampler: Optional[FeatureSampler] = None
) -> TreeNode:
    """
    递归生长二分树

    停止条件: 节点纯、达到 max_depth、样本不足 2 * min_leaf、
    无划分或下降量 <= min_gain。

    Args:
        feature_sampler: 每个节点的候选特征；None 表示全部特征
    """
    criterion = params.criterion

    def _grow(rows: np.ndarray, depth: int) -> TreeNode:
        y_node = y[rows]
        counts = np.bincount(y_node, minlength=n_classes)
        leaf = make_leaf(counts, criterion)
        if (
            leaf.distribution.is_pure
            or (params.max_depth is not None and depth >= params.max_depth)
            or rows.size < 2 * params.min_leaf
        ):
            return leaf

        features = feature_sampler() if feature_sampler is not None else None
        split = best_binary_split(
            X[rows], y_node, features, criterion, n_classes, params.min_leaf
        )
        if split is None or split.gain <= params.min_gain:
            return leaf

        goes_left = X[rows, split.feature_index] <= split.threshold
        children: List[Optional[TreeNode]] = [
            _grow(rows[goes_left], depth + 1),
            _grow(rows[~goes_left], depth + 1),
        ]
        return TreeNode(
            distribution=leaf.distribution,
            impurity=leaf.impurity,
            feature_index=split.feature_index,
            rule=Threshold(split.threshold),
            children=tuple(children),
            gain=split.gain,
        )

    return _grow(np.arange(y.shape[0]), 0)


def fit_cart(train: Dataset, params: Optional[TreeParams] = None) -> TreeModel:
    """
    训练 CART 决策树

    Args:
        train: 训练集
        params: 训练参数 (criterion 必须是 gini 或 entropy)

    Returns:
        TreeModel
    """
    params = (params or TreeParams()).validate()
    if params.criterion not in ('gini', 'entropy'):
        raise StrokeClassifierError(
            f"CART supports criterion gini or entropy, got {params.criterion!r}"
        )
    if train.n_rows == 0:
        raise EmptyTrainingSetError("Cannot fit a tree on an empty training set")

    root = grow_binary_tree(train.X, train.y, train.n_classes, params)
    return TreeModel(root, params, train.feature_names, train.class_names, algorithm='cart')
