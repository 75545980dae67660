"""
Impurity Measures - 不纯度度量

- entropy: -Σ p·log2(p)，以 bit 为单位
- gini_impurity: 1 - Σ p²  (纯节点为 0)
- information_gain: H(parent) - Σ (n_i / n)·H(child_i)
"""

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from ..errors import DistributionError

CRITERIA = ('gini', 'entropy', 'info_gain')


@dataclass(frozen=True, eq=False)
class ClassDistribution:
    """
    节点上各类别的样本数 (按 class_names 顺序)
    """
    counts: np.ndarray

    def __post_init__(self) -> None:
        counts = np.array(self.counts, dtype=np.int64).reshape(-1)
        if counts.size == 0:
            raise DistributionError("A class distribution needs at least one class")
        if np.any(counts < 0):
            raise DistributionError("Class counts must be non-negative")
        counts.setflags(write=False)
        object.__setattr__(self, 'counts', counts)

    @classmethod
    def from_labels(cls, y: np.ndarray, n_classes: int) -> "ClassDistribution":
        return cls(np.bincount(np.asarray(y, dtype=np.int64), minlength=n_classes))

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    @property
    def n_classes(self) -> int:
        return int(self.counts.size)

    @property
    def probabilities(self) -> np.ndarray:
        if self.total == 0:
            raise DistributionError("Empty distribution has no probabilities")
        return self.counts / self.total

    @property
    def majority(self) -> int:
        """样本最多的类别下标 (平局取下标最小)"""
        return int(np.argmax(self.counts))

    @property
    def is_pure(self) -> bool:
        return int(np.count_nonzero(self.counts)) <= 1

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ClassDistribution):
            return NotImplemented
        return np.array_equal(self.counts, other.counts)

    __hash__ = None  # type: ignore[assignment]


DistributionLike = Union[ClassDistribution, Sequence[int], np.ndarray]


def _as_distribution(dist: DistributionLike) -> ClassDistribution:
    return dist if isinstance(dist, ClassDistribution) else ClassDistribution(dist)


def _nonempty(dist: DistributionLike) -> ClassDistribution:
    dist = _as_distribution(dist)
    if dist.total == 0:
        raise DistributionError("Impurity of an empty distribution is undefined")
    return dist


def entropy(dist: DistributionLike) -> float:
    """熵 (bit)；p = 0 的项贡献 0"""
    return float(entropy_of_counts(_nonempty(dist).counts[None, :])[0])


def gini_impurity(dist: DistributionLike) -> float:
    """Gini 不纯度 1 - Σ p²"""
    return float(gini_of_counts(_nonempty(dist).counts[None, :])[0])


def information_gain(parent: DistributionLike, children: Sequence[DistributionLike]) -> float:
    """
    信息增益

    Args:
        parent: 父节点分布
        children: 子节点分布 (总数之和必须等于父节点)

    Returns:
        非负增益 (bit)
    """
    parent = _nonempty(parent)
    children = [_as_distribution(c) for c in children]
    if sum(c.total for c in children) != parent.total:
        raise DistributionError(
            f"Children total {sum(c.total for c in children)} != parent total {parent.total}"
        )
    weighted = sum(
        (c.total / parent.total) * entropy(c) for c in children if c.total > 0
    )
    return max(0.0, entropy(parent) - weighted)


# ---------------------------------------------------------------- vectorized

def gini_of_counts(counts: np.ndarray) -> np.ndarray:
    """对 (m, C) 计数矩阵逐行计算 Gini；总数为 0 的行记为 0"""
    counts = np.asarray(counts, dtype=np.float64)
    totals = counts.sum(axis=1)
    safe = np.where(totals > 0, totals, 1.0)
    p = counts / safe[:, None]
    return np.where(totals > 0, 1.0 - np.sum(p * p, axis=1), 0.0)


def entropy_of_counts(counts: np.ndarray) -> np.ndarray:
    """对 (m, C) 计数矩阵逐行计算熵 (bit)；总数为 0 的行记为 0"""
    counts = np.asarray(counts, dtype=np.float64)
    totals = counts.sum(axis=1)
    safe = np.where(totals > 0, totals, 1.0)
    p = counts / safe[:, None]
    logs = np.log2(p, out=np.zeros_like(p), where=p > 0)
    return np.where(totals > 0, -np.sum(p * logs, axis=1), 0.0)


def impurity_of_counts(counts: np.ndarray, criterion: str) -> np.ndarray:
    """按 criterion 选择度量；info_gain 使用熵"""
    if criterion == 'gini':
        return gini_of_counts(counts)
    if criterion in ('entropy', 'info_gain'):
        return entropy_of_counts(counts)
    raise ValueError(f"Unknown criterion: {criterion!r}")


def node_impurity(dist: DistributionLike, criterion: str) -> float:
    """单个分布在 criterion 下的不纯度 (空分布为 0)"""
    return float(impurity_of_counts(_as_distribution(dist).counts[None, :], criterion)[0])
