"""
Learners - 决策树 / ID3 / 随机森林

使用方式:
    from stroke_classifier.learners import TreeParams, fit_cart, predict

    model = fit_cart(train, TreeParams(criterion='gini'))
    label, scores = predict(model, train.rows[0])
"""

from .base import (
    ALGORITHMS,
    BaseLearner,
    CartLearner,
    ForestLearner,
    Id3Learner,
    TrainResult,
    accuracy,
    get_learner,
    top_features,
)
from .cart import Split, best_binary_split, fit_cart
from .dot import count_nodes_and_edges, export_dot, write_dot
from .forest import (
    ForestModel,
    ForestParams,
    bootstrap_sample,
    feature_importance,
    fit_forest,
    out_of_bag_score,
    predict_majority,
)
from .id3 import assign_bins, equal_frequency_edges, fit_id3
from .impurity import (
    CRITERIA,
    ClassDistribution,
    entropy,
    gini_impurity,
    information_gain,
)
from .serialize import load_model, model_from_dict, model_to_dict, save_model
from .tree import Bins, Threshold, TreeModel, TreeNode, TreeParams, predict

__all__ = [
    "ALGORITHMS",
    "BaseLearner",
    "CartLearner",
    "ForestLearner",
    "Id3Learner",
    "TrainResult",
    "accuracy",
    "get_learner",
    "top_features",
    "Split",
    "best_binary_split",
    "fit_cart",
    "count_nodes_and_edges",
    "export_dot",
    "write_dot",
    "ForestModel",
    "ForestParams",
    "bootstrap_sample",
    "feature_importance",
    "fit_forest",
    "out_of_bag_score",
    "predict_majority",
    "assign_bins",
    "equal_frequency_edges",
    "fit_id3",
    "CRITERIA",
    "ClassDistribution",
    "entropy",
    "gini_impurity",
    "information_gain",
    "load_model",
    "model_from_dict",
    "model_to_dict",
    "save_model",
    "Bins",
    "Threshold",
    "TreeModel",
    "TreeNode",
    "TreeParams",
    "predict",
]
