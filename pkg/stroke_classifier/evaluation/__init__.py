"""
Evaluation - 准确率、混淆矩阵、ROC/AUC、特征重叠与报告
"""

from .metrics import EvalReport, RocCurve, evaluate, roc_curves, roc_one_vs_rest
from .overlap import (
    CONTRAST_PAIRS,
    DEFAULT_FEATURES,
    PairOverlap,
    pair_overlap,
    pair_points,
    range_overlap,
    write_overlap,
)
from .report import (
    PUBLISHED_PAIR_BASELINES,
    ReportGenerator,
    compare_frame,
    compare_report,
    fmt,
    markdown_table,
    write_comparison,
)

__all__ = [
    "EvalReport",
    "RocCurve",
    "evaluate",
    "roc_curves",
    "roc_one_vs_rest",
    "CONTRAST_PAIRS",
    "DEFAULT_FEATURES",
    "PairOverlap",
    "pair_overlap",
    "pair_points",
    "range_overlap",
    "write_overlap",
    "PUBLISHED_PAIR_BASELINES",
    "ReportGenerator",
    "compare_frame",
    "compare_report",
    "fmt",
    "markdown_table",
    "write_comparison",
]
