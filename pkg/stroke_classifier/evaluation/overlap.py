"""
Feature Overlap - 击打类别在 (谱质心, 过零率) 平面上的重叠

输出文件:
- overlap.txt              每对类别的重叠程度 (Markdown)
- overlap.csv              同上，一对一行
- points_<a>_<b>.csv       两类的散点 (label, 两个特征)，用于作图
"""

from dataclasses import dataclass
from pathlib import Path
from typing import List, Sequence, Tuple

import numpy as np
import pandas as pd

from ..dataset import Dataset
from ..errors import DatasetError, FeatureMismatchError
from .report import _write_frame, fmt, markdown_table

DEFAULT_FEATURES: Tuple[str, str] = ('spectral_centroid_mean', 'zcr_mean')

# 重叠较少、用于对照的类别对
CONTRAST_PAIRS: Tuple[Tuple[str, str], ...] = (('dha', 'dhin'), ('tin', 'din'))


@dataclass(frozen=True)
class PairOverlap:
    """
    一对类别的重叠程度

    Attributes:
        pair: (类别 a, 类别 b)
        features: 两个特征名
        range_overlap: 每个特征上两类取值区间的交并比
        shared_fraction: 落在另一类包围盒内的点所占比例 (两类合计)
        means: 每类在两个特征上的均值 (a, b)
    """
    pair: Tuple[str, str]
    features: Tuple[str, str]
    range_overlap: Tuple[float, float]
    shared_fraction: float
    means: Tuple[Tuple[float, float], Tuple[float, float]]


def range_overlap(a: np.ndarray, b: np.ndarray) -> float:
    """两组取值的 [min, max] 区间交并比；两个区间都退化为同一点时为 1"""
    lo = max(a.min(), b.min())
    hi = min(a.max(), b.max())
    union = max(a.max(), b.max()) - min(a.min(), b.min())
    if hi < lo:
        return 0.0
    if union == 0:
        return 1.0
    return float((hi - lo) / union)


def _inside_box(points: np.ndarray, other: np.ndarray) -> np.ndarray:
    lo, hi = other.min(axis=0), other.max(axis=0)
    return np.all((points >= lo) & (points <= hi), axis=1)


def pair_points(
    ds: Dataset,
    pair: Tuple[str, str],
    features: Tuple[str, str] = DEFAULT_FEATURES
) -> pd.DataFrame:
    """
    取出两类的散点

    Returns:
        DataFrame(label, features[0], features[1])，保持表中行顺序
    """
    missing = [f for f in features if f not in ds.feature_names]
    if missing:
        raise FeatureMismatchError(f"Feature table has no column(s) {missing}")
    absent = [c for c in pair if c not in ds.class_names]
    if absent:
        raise DatasetError(f"Feature table has no rows for class(es) {absent}")

    columns = [ds.feature_names.index(f) for f in features]
    codes = [ds.class_names.index(c) for c in pair]
    mask = np.isin(ds.y, codes)
    frame = pd.DataFrame(ds.X[mask][:, columns], columns=list(features))
    frame.insert(0, 'label', [ds.class_names[k] for k in ds.y[mask]])
    return frame


def pair_overlap(
    ds: Dataset,
    pair: Tuple[str, str],
    features: Tuple[str, str] = DEFAULT_FEATURES
) -> PairOverlap:
    """计算一对类别在两个特征上的重叠"""
    points = pair_points(ds, pair, features)
    a = points[points.label == pair[0]][list(features)].to_numpy()
    b = points[points.label == pair[1]][list(features)].to_numpy()
    shared = _inside_box(a, b).sum() + _inside_box(b, a).sum()
    return PairOverlap(
        pair=pair,
        features=features,
        range_overlap=(range_overlap(a[:, 0], b[:, 0]), range_overlap(a[:, 1], b[:, 1])),
        shared_fraction=float(shared / (a.shape[0] + b.shape[0])),
        means=(tuple(a.mean(axis=0)), tuple(b.mean(axis=0))),
    )


def overlap_frame(overlaps: Sequence[PairOverlap]) -> pd.DataFrame:
    """overlap.csv 的内容"""
    records = []
    for o in overlaps:
        f0, f1 = o.features
        records.append({
            'class_a': o.pair[0],
            'class_b': o.pair[1],
            f"overlap[{f0}]": fmt(o.range_overlap[0]),
            f"overlap[{f1}]": fmt(o.range_overlap[1]),
            'shared_fraction': fmt(o.shared_fraction),
        })
    return pd.DataFrame(records)


def overlap_text(overlaps: Sequence[PairOverlap], title: str = "Feature overlap") -> str:
    """overlap.txt 的内容"""
    lines = [f"# {title}", ""]
    if overlaps:
        f0, f1 = overlaps[0].features
        lines += [f"- **features**: {f0}, {f1}", ""]
    frame = overlap_frame(overlaps)
    rows = [[str(v) for v in row] for row in frame.itertuples(index=False)]
    lines += markdown_table(list(frame.columns), rows)

    for o in overlaps:
        a, b = o.pair
        lines += ["", f"## {a} / {b}", ""]
        lines += markdown_table(
            ["class"] + list(o.features),
            [[c] + [fmt(v) for v in mean] for c, mean in zip(o.pair, o.means)],
        )
    return "\n".join(lines) + "\n"


def write_overlap(
    ds: Dataset,
    pairs: Sequence[Tuple[str, str]],
    output_dir: Path,
    features: Tuple[str, str] = DEFAULT_FEATURES
) -> List[Path]:
    """写出 overlap.txt、overlap.csv 和每对的散点文件"""
    overlaps = [pair_overlap(ds, pair, features) for pair in pairs]
    output_dir.mkdir(parents=True, exist_ok=True)
    text_path = output_dir / "overlap.txt"
    text_path.write_text(overlap_text(overlaps), encoding='utf-8')
    paths = [text_path, _write_frame(overlap_frame(overlaps), output_dir / "overlap.csv")]
    for a, b in pairs:
        frame = pair_points(ds, (a, b), features)
        for f in features:
            frame[f] = [fmt(v) for v in frame[f]]
        paths.append(_write_frame(frame, output_dir / f"points_{a}_{b}.csv"))
    return paths
