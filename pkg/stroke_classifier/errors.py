"""
Errors - 异常定义

所有库代码抛出的异常都继承自 StrokeClassifierError，
CLI 层统一捕获并输出。
"""

from pathlib import Path
from typing import Optional, Union


class StrokeClassifierError(Exception):
    """所有异常的基类"""


# ---------------------------------------------------------------- audio

class AudioFileNotFoundError(StrokeClassifierError):
    """音频文件不存在"""

    def __init__(self, path: Union[str, Path]):
        self.path = Path(path)
        super().__init__(f"Audio file does not exist: {self.path}")


class MalformedWavError(StrokeClassifierError):
    """RIFF/WAVE 头部损坏"""


class UnsupportedEncodingError(StrokeClassifierError):
    """非 PCM 16-bit 编码"""


class SampleRateMismatchError(StrokeClassifierError):
    """采样率与期望不一致"""

    def __init__(self, path: Union[str, Path], actual: int, expected: int):
        self.path = Path(path)
        self.actual = actual
        self.expected = expected
        super().__init__(
            f"{self.path}: sample rate {actual} Hz, expected {expected} Hz"
        )


class InvalidDurationError(StrokeClassifierError):
    """非正时长"""


class StrokeSpecError(StrokeClassifierError):
    """击打合成参数错误"""


# ---------------------------------------------------------------- features

class AnalysisConfigError(StrokeClassifierError):
    """分析参数不合法"""


class FrameError(StrokeClassifierError):
    """分帧或帧长度错误"""


# ---------------------------------------------------------------- dataset

class DatasetError(StrokeClassifierError):
    """数据集不满足不变量"""


class MissingLabelColumnError(DatasetError):
    """CSV 最后一列不是 label"""


class RaggedRowError(DatasetError):
    """CSV 行的字段数与表头不一致"""

    def __init__(self, row: int, expected: int, actual: Optional[int] = None):
        self.row = row
        self.expected = expected
        self.actual = actual
        detail = f", got {actual}" if actual is not None else ""
        super().__init__(f"Row {row}: expected {expected} fields{detail}")


class NonNumericCellError(DatasetError):
    """特征单元格无法解析为数值"""

    def __init__(self, row: int, column: str, value: str):
        self.row = row
        self.column = column
        self.value = value
        super().__init__(
            f"Row {row}, column '{column}': not a number: {value!r}"
        )


class StratificationError(DatasetError):
    """某类样本过少，无法分层划分"""


# ---------------------------------------------------------------- learners

class EmptyTrainingSetError(StrokeClassifierError):
    """训练集为空"""


class ArityMismatchError(StrokeClassifierError):
    """输入特征数与模型不符"""

    def __init__(self, expected: int, actual: int):
        self.expected = expected
        self.actual = actual
        super().__init__(f"Expected {expected} feature values, got {actual}")


class DistributionError(StrokeClassifierError):
    """类别分布为空或总数不一致"""


class ModelFormatError(StrokeClassifierError):
    """模型文件无法解析"""


# ---------------------------------------------------------------- evaluation

class EvaluationError(StrokeClassifierError):
    """评估输入不合法"""


class DegenerateClassError(EvaluationError):
    """ROC 所需的正例或负例缺失"""

    def __init__(self, class_index: int, reason: str):
        self.class_index = class_index
        self.reason = reason
        super().__init__(f"Class {class_index}: {reason}")


# ---------------------------------------------------------------- pipeline

class ConfigError(StrokeClassifierError):
    """配置文件错误"""


class FeatureMismatchError(StrokeClassifierError):
    """模型与数据的特征名不一致"""
