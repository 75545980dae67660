"""
Base Learner - 学习器基类

三种分类器 (cart / id3 / forest) 的统一接口：fit 得到模型，
train 在训练集上拟合并汇总训练/测试准确率。
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass, field, replace
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np

from ..dataset.table import Dataset
from ..errors import StrokeClassifierError
from .cart import fit_cart
from .forest import ForestModel, ForestParams, feature_importance, fit_forest
from .id3 import fit_id3
from .tree import TreeModel, TreeParams

Model = Union[TreeModel, ForestModel]

ALGORITHMS = ('cart', 'id3', 'forest')


@dataclass
class TrainResult:
    """训练结果"""
    learner_name: str
    success: bool
    model: Optional[Model] = None
    train_accuracy: float = 0.0
    test_accuracy: Optional[float] = None
    details: Dict[str, Any] = field(default_factory=dict)
    error_message: str = ""

    def __bool__(self) -> bool:
        return self.success


def accuracy(model: Model, ds: Dataset) -> float:
    """模型在数据集上的准确率 (空数据集为 0)"""
    if ds.n_rows == 0:
        return 0.0
    return float(np.mean(model.predict_indices(ds.X) == ds.y))


def top_features(model: Model, k: int = 10) -> List[Tuple[str, float]]:
    """重要性最高的 k 个特征 (同分时按特征顺序)"""
    importance = feature_importance(model)
    order = np.argsort(-importance, kind='stable')[:k]
    return [(model.feature_names[i], float(importance[i])) for i in order]


class BaseLearner(ABC):
    """
    学习器基类

    子类需要实现:
    - name: 算法名
    - fit(): 训练模型
    """

    @property
    @abstractmethod
    def name(self) -> str:
        """算法名"""
        pass

    @property
    def description(self) -> str:
        return f"{self.name} classifier"

    @abstractmethod
    def fit(self, train: Dataset) -> Model:
        """
        训练模型

        Args:
            train: 训练集

        Returns:
            训练好的模型
        """
        pass

    def summarize(self, model: Model) -> Dict[str, Any]:
        """模型摘要 (写入训练汇总)"""
        return {}

    def train(self, train: Dataset, test: Optional[Dataset] = None) -> TrainResult:
        """
        训练并计算准确率

        学习器错误不会抛出，而是记录在 TrainResult.error_message 中。

        Args:
            train: 训练集
            test: 可选测试集

        Returns:
            TrainResult
        """
        try:
            train.require_trainable()
            model = self.fit(train)
        except StrokeClassifierError as e:
            return TrainResult(learner_name=self.name, success=False, error_message=str(e))

        return TrainResult(
            learner_name=self.name,
            success=True,
            model=model,
            train_accuracy=accuracy(model, train),
            test_accuracy=accuracy(model, test) if test is not None else None,
            details=self.summarize(model),
        )


class CartLearner(BaseLearner):
    """CART 决策树 (gini / entropy)"""

    def __init__(self, params: Optional[TreeParams] = None):
        self.params = params or TreeParams()

    @property
    def name(self) -> str:
        return "cart"

    @property
    def description(self) -> str:
        return f"决策树 CART ({self.params.criterion})"

    def fit(self, train: Dataset) -> TreeModel:
        return fit_cart(train, self.params)

    def summarize(self, model: Model) -> Dict[str, Any]:
        assert isinstance(model, TreeModel)
        return {'n_nodes': model.n_nodes, 'depth': model.depth}


class Id3Learner(CartLearner):
    """ID3 (信息增益 + 等频分箱)"""

    def __init__(self, params: Optional[TreeParams] = None):
        super().__init__(replace(params or TreeParams(), criterion='info_gain'))

    @property
    def name(self) -> str:
        return "id3"

    @property
    def description(self) -> str:
        return f"ID3 ({self.params.id3_bins} bins)"

    def fit(self, train: Dataset) -> TreeModel:
        return fit_id3(train, self.params)


class ForestLearner(BaseLearner):
    """随机森林"""

    def __init__(self, params: Optional[ForestParams] = None):
        self.params = params or ForestParams()

    @property
    def name(self) -> str:
        return "forest"

    @property
    def description(self) -> str:
        return f"随机森林 ({self.params.n_trees} trees)"

    def fit(self, train: Dataset) -> ForestModel:
        return fit_forest(train, self.params)

    def summarize(self, model: Model) -> Dict[str, Any]:
        assert isinstance(model, ForestModel)
        return {
            'n_trees': model.n_trees,
            'oob_score': model.oob_score,
            'top_features': top_features(model),
        }


def get_learner(
    algorithm: str,
    tree_params: Optional[TreeParams] = None,
    forest_params: Optional[ForestParams] = None
) -> BaseLearner:
    """
    按算法名构造学习器

    Args:
        algorithm: cart / id3 / forest
        tree_params: 树参数 (cart, id3)
        forest_params: 森林参数 (forest)

    Raises:
        StrokeClassifierError: 未知算法名
    """
    if algorithm == 'cart':
        return CartLearner(tree_params)
    if algorithm == 'id3':
        return Id3Learner(tree_params)
    if algorithm == 'forest':
        return ForestLearner(forest_params)
    raise StrokeClassifierError(
        f"Unknown algorithm {algorithm!r}, expected one of {', '.join(ALGORITHMS)}"
    )
