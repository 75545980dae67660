"""
Tree Model - 决策树结构与预测

节点规则:
- Threshold(t): 二分 (CART)，x <= t 走左子树，否则右子树
- Bins(edges): 多路 (ID3)，edges 为训练时的分箱边界 (含最小值和最大值)，
  超出范围的值落入最近的箱；没有子树的箱走训练样本最多的兄弟节点
"""

from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence, Tuple, Union

import numpy as np

from ..errors import ArityMismatchError, StrokeClassifierError
from ..features.extractor import FeatureVector
from .impurity import CRITERIA, ClassDistribution, node_impurity


@dataclass(frozen=True)
class Threshold:
    """二分阈值"""
    t: float

    @property
    def n_branches(self) -> int:
        return 2

    def branch(self, value: float) -> int:
        return 0 if value <= self.t else 1


@dataclass(frozen=True)
class Bins:
    """等频分箱边界 (升序)"""
    edges: Tuple[float, ...]

    def __post_init__(self) -> None:
        edges = tuple(float(e) for e in self.edges)
        if len(edges) < 2 or any(b <= a for a, b in zip(edges, edges[1:])):
            raise StrokeClassifierError(f"Bin edges must be strictly ascending: {edges}")
        object.__setattr__(self, 'edges', edges)

    @property
    def n_branches(self) -> int:
        return len(self.edges) - 1

    def branch(self, value: float) -> int:
        # 只用内部边界，两端自然截断到首/末箱
        return int(np.searchsorted(self.edges[1:-1], value, side='right'))


Rule = Union[Threshold, Bins]


@dataclass(frozen=True)
class TreeNode:
    """
    树节点

    内部节点和叶子节点都保存训练时的类别分布；内部节点额外保存
    划分特征、规则、子节点以及该次划分的不纯度下降 (gain)。
    """
    distribution: ClassDistribution
    impurity: float = 0.0
    feature_index: Optional[int] = None
    rule: Optional[Rule] = None
    children: Tuple[Optional["TreeNode"], ...] = ()
    gain: float = 0.0

    @property
    def is_leaf(self) -> bool:
        return self.rule is None

    @property
    def n_samples(self) -> int:
        return self.distribution.total

    @property
    def fallback_index(self) -> int:
        """训练样本最多的子节点下标 (平局取最小)"""
        sizes = [c.n_samples if c is not None else -1 for c in self.children]
        return int(np.argmax(sizes))

    def child_for(self, value: float) -> "TreeNode":
        assert self.rule is not None
        child = self.children[self.rule.branch(value)]
        if child is None:
            child = self.children[self.fallback_index]
        return child  # type: ignore[return-value]

    def walk(self) -> Iterator["TreeNode"]:
        """先序遍历"""
        yield self
        for child in self.children:
            if child is not None:
                yield from child.walk()


def make_leaf(counts: np.ndarray, criterion: str) -> TreeNode:
    dist = ClassDistribution(counts)
    return TreeNode(dist, node_impurity(dist, criterion))


@dataclass(frozen=True)
class TreeParams:
    """
    树的训练参数

    Attributes:
        criterion: gini / entropy (CART)，info_gain (ID3)
        max_depth: 最大深度，None 表示不限
        min_leaf: 叶子最少样本数
        min_gain: 划分所需的最小不纯度下降 (严格大于)
        id3_bins: ID3 等频分箱数
    """
    criterion: str = 'gini'
    max_depth: Optional[int] = None
    min_leaf: int = 1
    min_gain: float = 0.0
    id3_bins: int = 8

    def validate(self) -> "TreeParams":
        if self.criterion not in CRITERIA:
            raise StrokeClassifierError(
                f"Unknown criterion {self.criterion!r}, expected one of {CRITERIA}"
            )
        if self.max_depth is not None and self.max_depth < 0:
            raise StrokeClassifierError(f"max_depth must be non-negative, got {self.max_depth}")
        if self.min_leaf < 1:
            raise StrokeClassifierError(f"min_leaf must be positive, got {self.min_leaf}")
        if self.min_gain < 0:
            raise StrokeClassifierError(f"min_gain must be non-negative, got {self.min_gain}")
        if self.id3_bins < 1:
            raise StrokeClassifierError(f"id3_bins must be positive, got {self.id3_bins}")
        return self


@dataclass(frozen=True)
class TreeModel:
    """
    训练好的决策树 (训练后不可变)

    Attributes:
        root: 根节点
        params: 训练参数
        feature_names: 特征名
        class_names: 类别名
        algorithm: cart / id3
    """
    root: TreeNode
    params: TreeParams
    feature_names: Tuple[str, ...]
    class_names: Tuple[str, ...]
    algorithm: str = 'cart'
    n_features: int = field(init=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, 'feature_names', tuple(self.feature_names))
        object.__setattr__(self, 'class_names', tuple(self.class_names))
        object.__setattr__(self, 'n_features', len(self.feature_names))
        for node in self.root.walk():
            if node.feature_index is not None and not 0 <= node.feature_index < self.n_features:
                raise StrokeClassifierError(
                    f"Node feature index {node.feature_index} out of range "
                    f"for {self.n_features} features"
                )
            if node.distribution.n_classes != len(self.class_names):
                raise StrokeClassifierError("Node distribution does not match class_names")

    @property
    def n_classes(self) -> int:
        return len(self.class_names)

    @property
    def n_nodes(self) -> int:
        return sum(1 for _ in self.root.walk())

    @property
    def depth(self) -> int:
        def _depth(node: TreeNode) -> int:
            kids = [c for c in node.children if c is not None]
            return 0 if not kids else 1 + max(_depth(c) for c in kids)
        return _depth(self.root)

    def leaf_for(self, x: np.ndarray) -> TreeNode:
        node = self.root
        while not node.is_leaf:
            node = node.child_for(float(x[node.feature_index]))
        return node

    def predict_indices(self, X: np.ndarray) -> np.ndarray:
        X = check_matrix(X, self.n_features)
        return np.array([self.leaf_for(row).distribution.majority for row in X], dtype=np.int64)

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        """每行的叶子分布 (归一化为概率)"""
        X = check_matrix(X, self.n_features)
        return np.vstack([self.leaf_for(row).distribution.probabilities for row in X])


def check_matrix(X: np.ndarray, n_features: int) -> np.ndarray:
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    if X.shape[1] != n_features:
        raise ArityMismatchError(n_features, X.shape[1])
    return X


def as_values(x: Union[FeatureVector, Sequence[float], np.ndarray]) -> np.ndarray:
    if isinstance(x, FeatureVector):
        return x.values
    return np.asarray(x, dtype=np.float64).reshape(-1)


def predict(
    model: TreeModel,
    x: Union[FeatureVector, Sequence[float], np.ndarray]
) -> Tuple[str, np.ndarray]:
    """
    单个实例的预测

    Args:
        model: 决策树
        x: 特征向量 (长度必须等于特征数)

    Returns:
        (类别名, 各类别概率)
    """
    values = as_values(x)
    if values.size != model.n_features:
        raise ArityMismatchError(model.n_features, values.size)
    leaf = model.leaf_for(values)
    return model.class_names[leaf.distribution.majority], leaf.distribution.probabilities
