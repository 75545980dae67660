"""
Random Forest - 随机森林

- 每棵树 t 使用独立的随机数生成器 default_rng([seed, t])，
  结果与训练顺序、进程数无关
- 每棵树在 bootstrap 样本上生长 CART，每个节点重新无放回抽取 mtry 个候选特征
- 预测为多数投票 (平局取类别下标最小)，投票比例作为 ROC 分数
"""

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from ..dataset.table import Dataset
from ..errors import ArityMismatchError, EmptyTrainingSetError, StrokeClassifierError
from ..features.extractor import FeatureVector
from .cart import grow_binary_tree
from .tree import TreeModel, TreeNode, TreeParams, as_values, check_matrix


@dataclass(frozen=True)
class ForestParams:
    """
    随机森林参数

    Attributes:
        n_trees: 树的数量
        mtry: 每个节点的候选特征数，None 表示 floor(sqrt(F))
        seed: 随机种子 (非负)
        tree_params: 单棵树参数 (criterion 为 gini 或 entropy)
        bootstrap: False 时每棵树使用全部训练行 (按原顺序)
        compute_oob: 是否计算袋外准确率
        n_jobs: 并行进程数，1 表示串行
    """
    n_trees: int = 100
    mtry: Optional[int] = None
    seed: int = 0
    tree_params: TreeParams = field(default_factory=TreeParams)
    bootstrap: bool = True
    compute_oob: bool = False
    n_jobs: int = 1

    def resolve_mtry(self, n_features: int) -> int:
        """校验参数并返回实际的 mtry"""
        if self.n_trees < 1:
            raise StrokeClassifierError(f"n_trees must be positive, got {self.n_trees}")
        if self.seed < 0:
            raise StrokeClassifierError(f"seed must be non-negative, got {self.seed}")
        if self.n_jobs < 1:
            raise StrokeClassifierError(f"n_jobs must be positive, got {self.n_jobs}")
        self.tree_params.validate()
        if self.tree_params.criterion not in ('gini', 'entropy'):
            raise StrokeClassifierError(
                f"Forest trees support criterion gini or entropy, got {self.tree_params.criterion!r}"
            )
        mtry = self.mtry if self.mtry is not None else max(1, math.isqrt(n_features))
        if not 1 <= mtry <= n_features:
            raise StrokeClassifierError(f"mtry must be within [1, {n_features}], got {mtry}")
        return mtry


@dataclass(frozen=True)
class ForestModel:
    """
    训练好的随机森林

    Attributes:
        trees: 各棵树 (共享 feature_names / class_names)
        bootstrap_indices: 每棵树的训练行下标
        params: 训练参数
        feature_names: 特征名
        class_names: 类别名
        oob_score: 袋外准确率 (未计算时为 None)
    """
    trees: Tuple[TreeModel, ...]
    bootstrap_indices: Tuple[np.ndarray, ...]
    params: ForestParams
    feature_names: Tuple[str, ...]
    class_names: Tuple[str, ...]
    oob_score: Optional[float] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, 'trees', tuple(self.trees))
        object.__setattr__(self, 'bootstrap_indices', tuple(
            np.asarray(idx, dtype=np.int64) for idx in self.bootstrap_indices
        ))
        object.__setattr__(self, 'feature_names', tuple(self.feature_names))
        object.__setattr__(self, 'class_names', tuple(self.class_names))
        if not self.trees:
            raise StrokeClassifierError("A forest needs at least one tree")
        if len(self.bootstrap_indices) not in (0, len(self.trees)):
            raise StrokeClassifierError("One bootstrap index set per tree is required")
        for tree in self.trees:
            if tree.feature_names != self.feature_names or tree.class_names != self.class_names:
                raise StrokeClassifierError("All trees must share feature and class names")

    @property
    def n_trees(self) -> int:
        return len(self.trees)

    @property
    def n_features(self) -> int:
        return len(self.feature_names)

    @property
    def n_classes(self) -> int:
        return len(self.class_names)

    def vote_counts(self, X: np.ndarray) -> np.ndarray:
        """(n, C) 每行各类别得票数"""
        X = check_matrix(X, self.n_features)
        votes = np.zeros((X.shape[0], self.n_classes), dtype=np.int64)
        rows = np.arange(X.shape[0])
        for tree in self.trees:
            votes[rows, tree.predict_indices(X)] += 1
        return votes

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        """投票比例 (每行和为 1)"""
        return self.vote_counts(X) / self.n_trees

    def predict_indices(self, X: np.ndarray) -> np.ndarray:
        return np.argmax(self.vote_counts(X), axis=1)


# ---------------------------------------------------------------- training

def bootstrap_sample(n: int, rng: np.random.Generator) -> np.ndarray:
    """有放回地抽取 n 个 [0, n) 内的下标"""
    if n < 1:
        raise StrokeClassifierError(f"Bootstrap needs n >= 1, got {n}")
    return rng.integers(0, n, size=n)


def tree_rng(seed: int, tree_index: int) -> np.random.Generator:
    """第 tree_index 棵树的独立随机数生成器"""
    return np.random.default_rng([seed, tree_index])


def _fit_one(
    args: Tuple[np.ndarray, np.ndarray, int, ForestParams, int, int]
) -> Tuple[TreeNode, np.ndarray]:
    X, y, n_classes, params, mtry, t = args
    rng = tree_rng(params.seed, t)
    n, n_features = X.shape
    rows = bootstrap_sample(n, rng) if params.bootstrap else np.arange(n)

    sampler = None
    if mtry < n_features:
        def sampler() -> np.ndarray:
            return np.sort(rng.choice(n_features, size=mtry, replace=False))

    root = grow_binary_tree(X[rows], y[rows], n_classes, params.tree_params, sampler)
    return root, rows


def fit_forest(train: Dataset, params: Optional[ForestParams] = None) -> ForestModel:
    """
    训练随机森林

    Args:
        train: 训练集
        params: 森林参数

    Returns:
        ForestModel (compute_oob 时带袋外准确率)
    """
    params = params or ForestParams()
    if train.n_rows == 0:
        raise EmptyTrainingSetError("Cannot fit a forest on an empty training set")
    mtry = params.resolve_mtry(train.n_features)

    jobs = [(train.X, train.y, train.n_classes, params, mtry, t) for t in range(params.n_trees)]
    if params.n_jobs > 1 and params.n_trees > 1:
        with ProcessPoolExecutor(max_workers=params.n_jobs) as pool:
            results = list(pool.map(_fit_one, jobs))
    else:
        results = [_fit_one(job) for job in jobs]

    trees = tuple(
        TreeModel(root, params.tree_params, train.feature_names, train.class_names, algorithm='cart')
        for root, _ in results
    )
    model = ForestModel(
        trees=trees,
        bootstrap_indices=tuple(rows for _, rows in results),
        params=params,
        feature_names=train.feature_names,
        class_names=train.class_names,
    )
    if params.compute_oob:
        model = replace(model, oob_score=out_of_bag_score(model, train))
    return model


def out_of_bag_score(model: ForestModel, train: Dataset) -> Optional[float]:
    """
    袋外准确率

    每行只由没有抽到它的树投票；没有任何袋外投票的行不计入。
    所有行都在袋内时返回 None。
    """
    if not model.bootstrap_indices:
        return None
    votes = np.zeros((train.n_rows, model.n_classes), dtype=np.int64)
    for tree, rows in zip(model.trees, model.bootstrap_indices):
        oob = np.setdiff1d(np.arange(train.n_rows), rows)
        if oob.size:
            votes[oob, tree.predict_indices(train.X[oob])] += 1
    covered = votes.sum(axis=1) > 0
    if not covered.any():
        return None
    predicted = np.argmax(votes[covered], axis=1)
    return float(np.mean(predicted == train.y[covered]))


# ---------------------------------------------------------------- prediction

def predict_majority(
    model: ForestModel,
    x: Union[FeatureVector, Sequence[float], np.ndarray]
) -> Tuple[str, np.ndarray]:
    """
    单个实例的多数投票

    Returns:
        (类别名, 各类别投票比例)
    """
    values = as_values(x)
    if values.size != model.n_features:
        raise ArityMismatchError(model.n_features, values.size)
    fractions = model.predict_proba(values[None, :])[0]
    return model.class_names[int(np.argmax(fractions))], fractions


# ---------------------------------------------------------------- importance

def tree_importance(tree: TreeModel) -> np.ndarray:
    """单棵树的不纯度下降累计 (未归一化)：Σ (n_node / n_root) · gain"""
    importance = np.zeros(tree.n_features)
    root_total = tree.root.n_samples
    if root_total == 0:
        return importance
    for node in tree.root.walk():
        if not node.is_leaf:
            importance[node.feature_index] += node.n_samples / root_total * node.gain
    return importance


def feature_importance(model: Union[ForestModel, TreeModel]) -> np.ndarray:
    """
    平均不纯度下降 (MDI) 特征重要性

    Returns:
        非负且和为 1 的数组；全部为 0 时返回均匀分布
    """
    trees: List[TreeModel] = list(model.trees) if isinstance(model, ForestModel) else [model]
    importance = np.mean([tree_importance(t) for t in trees], axis=0)
    total = importance.sum()
    if total <= 0:
        return np.full(importance.size, 1.0 / importance.size)
    return importance / total
