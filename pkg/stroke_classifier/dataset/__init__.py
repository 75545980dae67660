"""
Dataset - 特征表读写与训练/测试划分

使用方式:
    from stroke_classifier.dataset import read_csv, train_test_split

    ds = read_csv('features.csv')
    train, test = train_test_split(ds, 0.7, seed=42)
"""

from .table import (
    LABEL_COLUMN,
    Dataset,
    read_csv,
    train_test_split,
    write_csv,
)

__all__ = [
    "LABEL_COLUMN",
    "Dataset",
    "read_csv",
    "train_test_split",
    "write_csv",
]
