"""
Tabla Stroke Classifier - 塔布拉鼓击打 (bol) 分类工具包

从 WAV 片段提取频谱/时域特征，用 CART、ID3 和随机森林分类，
输出准确率、混淆矩阵和一对多 ROC。

快速开始:
    # 命令行
    tsc synth corpus/ --clips 50
    tsc extract corpus/ features.csv
    tsc train features.csv --algo forest -o forest.yaml
    tsc evaluate forest.yaml features.csv -o report/

    # Python API
    from stroke_classifier import Orchestrator

    orchestrator = Orchestrator()
    result = orchestrator.train('features.csv', 'cart', 'cart.yaml')

配置文件 (.tsc.yaml):
    analysis:
      texture_frames: 1
    forest:
      n_trees: 100
    seed: 7
"""

__version__ = "1.0.0"
__author__ = "KaiHong DevOps Team"

# 核心组件
from .errors import StrokeClassifierError
from .features import AnalysisConfig, FeatureExtractor, extract_features
from .learners import (
    ForestParams,
    TreeParams,
    fit_cart,
    fit_forest,
    fit_id3,
    load_model,
    save_model,
)
from .pipeline import Orchestrator, PipelineConfig, StageResult, load_config

__all__ = [
    "__version__",
    # Errors
    "StrokeClassifierError",
    # Features
    "AnalysisConfig",
    "FeatureExtractor",
    "extract_features",
    # Learners
    "ForestParams",
    "TreeParams",
    "fit_cart",
    "fit_forest",
    "fit_id3",
    "load_model",
    "save_model",
    # Pipeline
    "Orchestrator",
    "PipelineConfig",
    "StageResult",
    "load_config",
]
