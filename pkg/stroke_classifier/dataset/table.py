"""
Feature Table - 特征表 (CSV) 与训练/测试划分

CSV 格式: 表头为特征名，最后一列为 label；每行一个实例。
浮点数以 17 位有效数字写出，读回后逐位相同。
"""

import math
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from ..errors import (
    DatasetError,
    MissingLabelColumnError,
    NonNumericCellError,
    RaggedRowError,
    StratificationError,
)
from ..features.extractor import FeatureVector

LABEL_COLUMN = 'label'
FLOAT_FORMAT = '%.17g'


@dataclass(frozen=True, eq=False)
class Dataset:
    """
    特征数据集

    Attributes:
        X: (n_rows, n_features) 特征矩阵
        y: (n_rows,) 类别下标 (对应 class_names)
        class_names: 类别名，有序且唯一
        feature_names: 特征名
    """
    X: np.ndarray
    y: np.ndarray
    class_names: Tuple[str, ...]
    feature_names: Tuple[str, ...]

    def __post_init__(self) -> None:
        X = np.array(self.X, dtype=np.float64)
        y = np.array(self.y, dtype=np.int64).reshape(-1)
        class_names = tuple(str(c) for c in self.class_names)
        feature_names = tuple(str(f) for f in self.feature_names)

        if not feature_names:
            raise DatasetError("A dataset needs at least one feature")
        if len(set(class_names)) != len(class_names):
            raise DatasetError("Class names must be unique")
        if X.size == 0:
            X = X.reshape(0, len(feature_names))
        if X.ndim != 2 or X.shape[1] != len(feature_names):
            raise DatasetError(
                f"Every row needs {len(feature_names)} values, got shape {X.shape}"
            )
        if X.shape[0] != y.shape[0]:
            raise DatasetError(f"{X.shape[0]} rows but {y.shape[0]} labels")
        if y.size and (y.min() < 0 or y.max() >= len(class_names)):
            raise DatasetError("Row label outside class_names")
        if not np.all(np.isfinite(X)):
            raise DatasetError("Feature values must be finite")

        X.setflags(write=False)
        y.setflags(write=False)
        object.__setattr__(self, 'X', X)
        object.__setattr__(self, 'y', y)
        object.__setattr__(self, 'class_names', class_names)
        object.__setattr__(self, 'feature_names', feature_names)

    # ------------------------------------------------------------ construction

    @classmethod
    def from_vectors(
        cls,
        vectors: Iterable[FeatureVector],
        class_names: Optional[Sequence[str]] = None
    ) -> "Dataset":
        """
        由特征向量构造数据集

        Args:
            vectors: 特征向量 (必须带 label 且特征名一致)
            class_names: 类别顺序；缺省为首次出现顺序
        """
        vectors = list(vectors)
        if not vectors:
            raise DatasetError("No feature vectors")
        names = vectors[0].names
        for v in vectors:
            if v.names != names:
                raise DatasetError("Feature vectors have different feature names")
            if v.label is None:
                raise DatasetError("Every feature vector needs a label")

        labels = [v.label for v in vectors]
        if class_names is None:
            class_names = list(dict.fromkeys(labels))
        index = {name: i for i, name in enumerate(class_names)}
        missing = sorted(set(labels) - set(index))
        if missing:
            raise DatasetError(f"Labels not in class_names: {missing}")

        return cls(
            X=np.vstack([v.values for v in vectors]),
            y=np.array([index[label] for label in labels]),
            class_names=tuple(class_names),
            feature_names=tuple(names),
        )

    # ------------------------------------------------------------ accessors

    @property
    def n_rows(self) -> int:
        return int(self.X.shape[0])

    @property
    def n_features(self) -> int:
        return len(self.feature_names)

    @property
    def n_classes(self) -> int:
        return len(self.class_names)

    @property
    def labels(self) -> List[str]:
        return [self.class_names[i] for i in self.y]

    @property
    def rows(self) -> List[FeatureVector]:
        return [
            FeatureVector(self.X[i], self.feature_names, self.class_names[self.y[i]])
            for i in range(self.n_rows)
        ]

    def class_counts(self) -> np.ndarray:
        return np.bincount(self.y, minlength=self.n_classes)

    def subset(self, indices: Sequence[int]) -> "Dataset":
        """按行下标取子集 (保留 class_names)"""
        idx = np.asarray(indices, dtype=np.int64)
        return Dataset(self.X[idx], self.y[idx], self.class_names, self.feature_names)

    def require_trainable(self) -> None:
        """训练前检查: 至少 1 行、至少 2 个类别"""
        if self.n_rows == 0:
            raise DatasetError("Training requires at least one row")
        if self.n_classes < 2:
            raise DatasetError("Training requires at least two classes")

    def __len__(self) -> int:
        return self.n_rows

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Dataset):
            return NotImplemented
        return (
            self.class_names == other.class_names
            and self.feature_names == other.feature_names
            and np.array_equal(self.y, other.y)
            and np.array_equal(self.X, other.X)
        )

    __hash__ = None  # type: ignore[assignment]


# ---------------------------------------------------------------- CSV

def write_csv(ds: Dataset, path: Union[str, Path]) -> Path:
    """
    写出特征表

    Args:
        ds: 数据集
        path: 输出路径

    Returns:
        输出路径
    """
    path = Path(path)
    frame = pd.DataFrame(ds.X, columns=list(ds.feature_names))
    frame[LABEL_COLUMN] = ds.labels
    try:
        frame.to_csv(
            path,
            index=False,
            encoding='utf-8',
            float_format=FLOAT_FORMAT,
            lineterminator='\n',
        )
    except OSError as e:
        raise DatasetError(f"Cannot write {path}: {e}") from e
    return path


_PARSER_LINE = re.compile(r'Expected (\d+) fields in line (\d+), saw (\d+)')


def read_csv(path: Union[str, Path]) -> Dataset:
    """
    读取特征表

    行号从 1 开始计数，不含表头。

    Raises:
        MissingLabelColumnError: 最后一列不是 label
        RaggedRowError: 某行字段数不对
        NonNumericCellError: 特征单元格不是有限数值
    """
    path = Path(path)
    if not path.is_file():
        raise DatasetError(f"CSV file does not exist: {path}")

    try:
        frame = pd.read_csv(path, dtype=str, keep_default_na=False, encoding='utf-8')
    except pd.errors.EmptyDataError as e:
        raise DatasetError(f"{path}: empty CSV file") from e
    except pd.errors.ParserError as e:
        match = _PARSER_LINE.search(str(e))
        if match:
            expected, line, actual = (int(g) for g in match.groups())
            raise RaggedRowError(line - 1, expected, actual) from e
        raise DatasetError(f"{path}: {e}") from e

    columns = [str(c) for c in frame.columns]
    if not columns or columns[-1] != LABEL_COLUMN:
        raise MissingLabelColumnError(
            f"{path}: last column must be '{LABEL_COLUMN}', got {columns[-1:] or 'nothing'}"
        )
    feature_columns = columns[:-1]
    if not feature_columns:
        raise DatasetError(f"{path}: no feature columns")

    # 字段不足的行会被补成 NaN
    short = frame.isna().any(axis=1).to_numpy()
    if short.any():
        row = int(np.flatnonzero(short)[0])
        raise RaggedRowError(row + 1, len(columns))

    X = np.empty((len(frame), len(feature_columns)))
    for j, column in enumerate(feature_columns):
        X[:, j] = _parse_column(frame[column].tolist(), column)

    labels = frame[LABEL_COLUMN].tolist()
    class_names = list(dict.fromkeys(labels))
    index = {name: i for i, name in enumerate(class_names)}
    return Dataset(
        X=X,
        y=np.array([index[label] for label in labels], dtype=np.int64),
        class_names=tuple(class_names),
        feature_names=tuple(feature_columns),
    )


def _parse_column(cells: List[str], column: str) -> np.ndarray:
    values = np.empty(len(cells))
    for i, cell in enumerate(cells):
        try:
            value = float(cell)
        except ValueError:
            raise NonNumericCellError(i + 1, column, cell) from None
        if not math.isfinite(value):
            raise NonNumericCellError(i + 1, column, cell)
        values[i] = value
    return values


# ---------------------------------------------------------------- split

def train_test_split(
    ds: Dataset,
    train_fraction: float = 0.7,
    seed: int = 42
) -> Tuple[Dataset, Dataset]:
    """
    分层划分训练/测试集

    每个类别独立打乱 (种子固定)，前 ceil(fraction * n_c) 行进入训练集，
    该行数再夹到 [1, n_c - 1]，保证每个类别在测试集里也至少有 1 行
    (例如 fraction=0.9、n_c=5 时为 4 / 1)。两个子集保持原始行顺序。

    Args:
        ds: 数据集
        train_fraction: 训练集比例 (0, 1)
        seed: 随机种子

    Returns:
        (train, test)
    """
    if not 0.0 < train_fraction < 1.0:
        raise DatasetError(f"train_fraction must be within (0, 1), got {train_fraction}")
    if ds.n_rows < 2:
        raise DatasetError("Splitting requires at least two rows")

    rng = np.random.default_rng(seed)
    train_idx: List[np.ndarray] = []
    test_idx: List[np.ndarray] = []
    for c, name in enumerate(ds.class_names):
        members = np.flatnonzero(ds.y == c)
        if members.size == 0:
            continue
        if members.size < 2:
            raise StratificationError(
                f"Class '{name}' has {members.size} row, at least 2 are needed to stratify"
            )
        shuffled = rng.permutation(members)
        n_train = math.ceil(train_fraction * members.size - 1e-9)
        n_train = min(max(n_train, 1), members.size - 1)
        train_idx.append(shuffled[:n_train])
        test_idx.append(shuffled[n_train:])

    train = np.sort(np.concatenate(train_idx))
    test = np.sort(np.concatenate(test_idx))
    return ds.subset(train), ds.subset(test)
