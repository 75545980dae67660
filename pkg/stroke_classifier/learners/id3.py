"""
ID3 - 信息增益多路决策树

连续特征在训练前一次性按训练集分位数做等频分箱；每个节点在尚未使用的
特征中选信息增益最大者 (平局取下标最小)，每个非空箱一个子节点，
同一路径上不重复使用特征。
"""

from dataclasses import replace
from typing import Dict, FrozenSet, List, Optional, Tuple

import numpy as np

from ..dataset.table import Dataset
from ..errors import EmptyTrainingSetError, StrokeClassifierError
from .cart import GAIN_TOLERANCE
from .impurity import entropy_of_counts
from .tree import Bins, TreeModel, TreeNode, TreeParams, make_leaf


def equal_frequency_edges(values: np.ndarray, n_bins: int) -> np.ndarray:
    """
    等频分箱边界

    取 linspace(0, 1, n_bins + 1) 处的分位数并去重。去重后只剩两个边界时
    插入中点，使二值特征仍分为两箱；常数特征只有一个边界 (不可分)。

    Args:
        values: 训练集上某特征的取值
        n_bins: 目标箱数

    Returns:
        严格升序的边界数组
    """
    values = np.asarray(values, dtype=np.float64)
    edges = np.unique(np.quantile(values, np.linspace(0.0, 1.0, n_bins + 1)))
    if edges.size == 2:
        mid = (edges[0] + edges[1]) / 2.0
        if edges[0] < mid < edges[1]:
            edges = np.array([edges[0], mid, edges[1]])
    return edges


def assign_bins(values: np.ndarray, edges: np.ndarray) -> np.ndarray:
    """按内部边界分箱 (与 Bins.branch 一致，超出范围截断到首/末箱)"""
    inner = np.asarray(edges, dtype=np.float64)[1:-1]
    return np.searchsorted(inner, np.asarray(values, dtype=np.float64), side='right')


def _discretize(X: np.ndarray, n_bins: int) -> Tuple[Dict[int, Bins], np.ndarray]:
    rules: Dict[int, Bins] = {}
    codes = np.zeros(X.shape, dtype=np.int64)
    for j in range(X.shape[1]):
        edges = equal_frequency_edges(X[:, j], n_bins)
        if edges.size < 2:
            continue
        rules[j] = Bins(tuple(edges))
        codes[:, j] = assign_bins(X[:, j], edges)
    return rules, codes


def _info_gain(
    codes: np.ndarray,
    y: np.ndarray,
    n_bins: int,
    n_classes: int,
    parent_entropy: float
) -> Tuple[float, np.ndarray]:
    """返回 (信息增益, 各箱计数矩阵 (n_bins, C))"""
    counts = np.bincount(codes * n_classes + y, minlength=n_bins * n_classes)
    counts = counts.reshape(n_bins, n_classes)
    sizes = counts.sum(axis=1)
    weighted = float(np.sum(sizes * entropy_of_counts(counts)) / y.size)
    return max(0.0, parent_entropy - weighted), counts


def fit_id3(train: Dataset, params: Optional[TreeParams] = None) -> TreeModel:
    """
    训练 ID3 决策树

    停止条件: 节点纯、特征用尽、最大增益 <= min_gain、达到 max_depth。
    子节点样本少于 min_leaf 的特征不参与选择。

    Args:
        train: 训练集
        params: 训练参数 (criterion 固定为 info_gain，id3_bins >= 2)

    Returns:
        TreeModel
    """
    params = replace(params or TreeParams(), criterion='info_gain').validate()
    if params.id3_bins < 2:
        raise StrokeClassifierError(f"ID3 needs at least 2 bins, got {params.id3_bins}")
    if train.n_rows == 0:
        raise EmptyTrainingSetError("Cannot fit a tree on an empty training set")

    X, y, n_classes = train.X, train.y, train.n_classes
    rules, codes = _discretize(X, params.id3_bins)

    def _grow(rows: np.ndarray, available: FrozenSet[int], depth: int) -> TreeNode:
        y_node = y[rows]
        counts = np.bincount(y_node, minlength=n_classes)
        leaf = make_leaf(counts, params.criterion)
        if (
            leaf.distribution.is_pure
            or not available
            or (params.max_depth is not None and depth >= params.max_depth)
        ):
            return leaf

        best: Optional[Tuple[int, float, np.ndarray]] = None
        for j in sorted(available):
            n_bins = rules[j].n_branches
            gain, bin_counts = _info_gain(
                codes[rows, j], y_node, n_bins, n_classes, leaf.impurity
            )
            sizes = bin_counts.sum(axis=1)
            if np.any((sizes > 0) & (sizes < params.min_leaf)):
                continue
            if best is None or gain > best[1] + GAIN_TOLERANCE:
                best = (j, gain, sizes)

        if best is None or best[1] <= max(params.min_gain, GAIN_TOLERANCE):
            return leaf

        j, gain, sizes = best
        remaining = available - {j}
        children: List[Optional[TreeNode]] = []
        for b in range(sizes.size):
            if sizes[b] == 0:
                children.append(None)
            else:
                children.append(_grow(rows[codes[rows, j] == b], remaining, depth + 1))
        return TreeNode(
            distribution=leaf.distribution,
            impurity=leaf.impurity,
            feature_index=j,
            rule=rules[j],
            children=tuple(children),
            gain=gain,
        )

    root = _grow(np.arange(train.n_rows), frozenset(rules), 0)
    return TreeModel(root, params, train.feature_names, train.class_names, algorithm='id3')
