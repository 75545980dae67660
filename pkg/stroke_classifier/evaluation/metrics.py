"""
Metrics - 准确率、混淆矩阵与一对多 ROC

- 混淆矩阵: 行为真实类别，列为预测类别
- ROC: 以类别 k 的分数为判别值，阈值取全部不同分数加 ±inf，
  分数 >= 阈值判为正类；AUC 用梯形法计算
"""

from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.integrate import trapezoid

from ..errors import DegenerateClassError, EvaluationError


@dataclass(frozen=True, eq=False)
class EvalReport:
    """
    评估结果

    Attributes:
        accuracy: 准确率 (trace / n_test)
        confusion: (C, C) 计数矩阵
        precision: 每类精确率 (从未被预测的类别为 0)
        recall: 每类召回率 (测试集中没有的类别为 0)
        n_test: 测试实例数
        class_names: 类别名
    """
    accuracy: float
    confusion: np.ndarray
    precision: np.ndarray
    recall: np.ndarray
    n_test: int
    class_names: Tuple[str, ...]

    @property
    def n_classes(self) -> int:
        return len(self.class_names)

    @property
    def support(self) -> np.ndarray:
        """每类真实实例数 (混淆矩阵行和)"""
        return self.confusion.sum(axis=1)

    def recall_of(self, class_name: str) -> float:
        try:
            return float(self.recall[self.class_names.index(class_name)])
        except ValueError:
            raise EvaluationError(f"Unknown class: {class_name!r}") from None


def evaluate(
    pairs: Iterable[Tuple[int, int]],
    n_classes: int,
    class_names: Optional[Sequence[str]] = None
) -> EvalReport:
    """
    由 (真实类别, 预测类别) 对计算评估结果

    Args:
        pairs: (truth, predicted) 类别下标对
        n_classes: 类别数 C
        class_names: 类别名，默认 "0".."C-1"

    Raises:
        EvaluationError: 没有预测或类别下标越界
    """
    data = np.array(list(pairs), dtype=np.int64).reshape(-1, 2)
    if data.shape[0] == 0:
        raise EvaluationError("Cannot evaluate an empty prediction set")
    if n_classes < 1:
        raise EvaluationError(f"n_classes must be positive, got {n_classes}")
    if data.min() < 0 or data.max() >= n_classes:
        raise EvaluationError(f"Class index outside [0, {n_classes})")
    if class_names is None:
        class_names = [str(i) for i in range(n_classes)]
    if len(class_names) != n_classes:
        raise EvaluationError(f"{len(class_names)} class names for {n_classes} classes")

    confusion = np.zeros((n_classes, n_classes), dtype=np.int64)
    np.add.at(confusion, (data[:, 0], data[:, 1]), 1)

    hits = np.diag(confusion).astype(np.float64)
    predicted = confusion.sum(axis=0)
    actual = confusion.sum(axis=1)
    precision = np.divide(hits, predicted, out=np.zeros(n_classes), where=predicted > 0)
    recall = np.divide(hits, actual, out=np.zeros(n_classes), where=actual > 0)

    return EvalReport(
        accuracy=float(hits.sum() / data.shape[0]),
        confusion=confusion,
        precision=precision,
        recall=recall,
        n_test=int(data.shape[0]),
        class_names=tuple(class_names),
    )


@dataclass(frozen=True, eq=False)
class RocCurve:
    """
    一对多 ROC 曲线

    Attributes:
        class_index: 正类下标
        points: (m, 2) 数组，每行 (fpr, tpr)，从 (0,0) 到 (1,1)
        thresholds: 每个点对应的阈值 (首个为 +inf)
        auc: 曲线下面积
    """
    class_index: int
    points: np.ndarray
    thresholds: np.ndarray
    auc: float

    @property
    def fpr(self) -> np.ndarray:
        return self.points[:, 0]

    @property
    def tpr(self) -> np.ndarray:
        return self.points[:, 1]


def roc_one_vs_rest(scores: np.ndarray, truths: Sequence[int], class_index: int) -> RocCurve:
    """
    类别 class_index 的一对多 ROC

    Args:
        scores: (n, C) 每个实例各类别的分数
        truths: (n,) 真实类别下标
        class_index: 正类

    Raises:
        DegenerateClassError: 正类或负类实例为空
    """
    scores = np.atleast_2d(np.asarray(scores, dtype=np.float64))
    truths = np.asarray(truths, dtype=np.int64)
    if scores.shape[0] != truths.shape[0]:
        raise EvaluationError(f"{scores.shape[0]} score rows but {truths.shape[0]} labels")
    if not 0 <= class_index < scores.shape[1]:
        raise EvaluationError(f"Class index {class_index} outside [0, {scores.shape[1]})")

    s = scores[:, class_index]
    positive = truths == class_index
    n_pos = int(positive.sum())
    n_neg = int(positive.size - n_pos)
    if n_pos == 0:
        raise DegenerateClassError(class_index, "no positive instances")
    if n_neg == 0:
        raise DegenerateClassError(class_index, "no negative instances")

    order = np.argsort(-s, kind='stable')
    s_sorted = s[order]
    tp = np.cumsum(positive[order])
    fp = np.cumsum(~positive[order])
    # 每个不同分数取最后一次出现的位置，即阈值 = 该分数时的累计计数
    last = np.flatnonzero(np.append(s_sorted[1:] != s_sorted[:-1], True))

    fpr = np.concatenate([[0.0], fp[last] / n_neg, [1.0]])
    tpr = np.concatenate([[0.0], tp[last] / n_pos, [1.0]])
    thresholds = np.concatenate([[np.inf], s_sorted[last], [-np.inf]])

    keep = np.ones(fpr.size, dtype=bool)
    keep[1:] = (np.diff(fpr) != 0) | (np.diff(tpr) != 0)
    points = np.column_stack([fpr[keep], tpr[keep]])
    return RocCurve(
        class_index=class_index,
        points=points,
        thresholds=thresholds[keep],
        auc=float(np.clip(trapezoid(points[:, 1], points[:, 0]), 0.0, 1.0)),
    )


def roc_curves(
    scores: np.ndarray,
    truths: Sequence[int]
) -> Tuple[List[RocCurve], List[Tuple[int, str]]]:
    """
    所有类别的一对多 ROC

    Returns:
        (曲线列表, 跳过的 (类别下标, 原因) 列表)
    """
    scores = np.atleast_2d(np.asarray(scores, dtype=np.float64))
    curves: List[RocCurve] = []
    skipped: List[Tuple[int, str]] = []
    for k in range(scores.shape[1]):
        try:
            curves.append(roc_one_vs_rest(scores, truths, k))
        except DegenerateClassError as e:
            skipped.append((k, e.reason))
    return curves, skipped
