"""
Feature Extractor - 特征提取器

每帧计算 29 个基础特征 (ZCR, 质心, 滚降, 通量, MFCC0-12, 12 维 chroma)，
按纹理窗聚合为均值和 (总体) 标准差，得到 58 维特征向量。

特征组可扩展：传入自定义的 FeatureGroup 列表即可，输出格式不变。
"""

from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from ..audio.clip import AudioClip, peak_normalize
from ..errors import StrokeClassifierError
from .config import AnalysisConfig
from .spectral import (
    PITCH_CLASSES,
    bin_frequencies,
    centroid_matrix,
    chroma_matrix,
    flux_matrix,
    frame_signal,
    magnitude_matrix,
    mfcc_matrix,
    rolloff_matrix,
    zero_crossing_rate_matrix,
)


@dataclass(frozen=True, eq=False)
class FeatureVector:
    """
    一个实例 (一个纹理窗) 的特征

    Attributes:
        values: 特征值
        names: 特征名 (与 values 等长)
        label: 类别标签
    """
    values: np.ndarray
    names: Tuple[str, ...]
    label: Optional[str] = None

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=np.float64).reshape(-1)
        names = tuple(self.names)
        if values.size != len(names):
            raise StrokeClassifierError(
                f"{values.size} feature values but {len(names)} names"
            )
        if not np.all(np.isfinite(values)):
            raise StrokeClassifierError("Feature values must be finite")
        values.setflags(write=False)
        object.__setattr__(self, 'values', values)
        object.__setattr__(self, 'names', names)

    def __len__(self) -> int:
        return len(self.names)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FeatureVector):
            return NotImplemented
        return (
            self.names == other.names
            and self.label == other.label
            and np.array_equal(self.values, other.values)
        )

    __hash__ = None  # type: ignore[assignment]


@dataclass(frozen=True)
class FrameBatch:
    """一个片段所有帧的中间结果，供各特征组共享"""
    frames: np.ndarray
    magnitudes: np.ndarray
    frequencies: np.ndarray
    sample_rate_hz: int
    cfg: AnalysisConfig


@dataclass(frozen=True)
class FeatureGroup:
    """
    一组帧级特征

    Attributes:
        name: 组名
        names: cfg -> 该组各列的特征名
        compute: FrameBatch -> (n_frames, len(names)) 数组
    """
    name: str
    names: Callable[[AnalysisConfig], Sequence[str]]
    compute: Callable[[FrameBatch], np.ndarray]


def _column(values: np.ndarray) -> np.ndarray:
    return np.asarray(values, dtype=np.float64).reshape(-1, 1)


DEFAULT_GROUPS: Tuple[FeatureGroup, ...] = (
    FeatureGroup(
        'zcr',
        lambda cfg: ['zcr'],
        lambda b: _column(zero_crossing_rate_matrix(b.frames)),
    ),
    FeatureGroup(
        'spectral_centroid',
        lambda cfg: ['spectral_centroid'],
        lambda b: _column(centroid_matrix(b.magnitudes, b.frequencies)),
    ),
    FeatureGroup(
        'spectral_rolloff',
        lambda cfg: ['spectral_rolloff'],
        lambda b: _column(rolloff_matrix(b.magnitudes, b.frequencies, b.cfg.rolloff_fraction)),
    ),
    FeatureGroup(
        'spectral_flux',
        lambda cfg: ['spectral_flux'],
        lambda b: _column(flux_matrix(b.magnitudes)),
    ),
    FeatureGroup(
        'mfcc',
        lambda cfg: [f'mfcc{i}' for i in range(cfg.n_mfcc)],
        lambda b: mfcc_matrix(b.magnitudes, b.sample_rate_hz, b.cfg),
    ),
    FeatureGroup(
        'chroma',
        lambda cfg: [f'chroma_{pc}' for pc in PITCH_CLASSES],
        lambda b: chroma_matrix(b.magnitudes, b.sample_rate_hz, b.cfg),
    ),
)


class FeatureExtractor:
    """
    特征提取器

    使用方式:
        extractor = FeatureExtractor(AnalysisConfig(texture_frames=3))
        vectors = extractor.extract(clip)
    """

    def __init__(
        self,
        cfg: Optional[AnalysisConfig] = None,
        groups: Optional[Sequence[FeatureGroup]] = None
    ):
        """
        Args:
            cfg: 分析参数，默认 AnalysisConfig()
            groups: 特征组列表，默认全部 29 个基础特征
        """
        self.cfg = (cfg or AnalysisConfig()).validate()
        self.groups = tuple(groups) if groups is not None else DEFAULT_GROUPS

    @property
    def base_names(self) -> List[str]:
        """帧级基础特征名 (默认 29 个)"""
        return [name for g in self.groups for name in g.names(self.cfg)]

    @property
    def feature_names(self) -> List[str]:
        """聚合后的特征名：每个基础特征依次为 _mean, _std"""
        return [f"{name}_{stat}" for name in self.base_names for stat in ('mean', 'std')]

    def frame_features(self, clip: AudioClip) -> np.ndarray:
        """
        计算帧级特征矩阵

        Returns:
            (n_frames, n_base_features)
        """
        self.cfg.validate(clip.sample_rate_hz)
        frames = frame_signal(peak_normalize(clip), self.cfg)
        mags = magnitude_matrix(frames)
        batch = FrameBatch(
            frames=frames,
            magnitudes=mags,
            frequencies=bin_frequencies(mags.shape[1], clip.sample_rate_hz),
            sample_rate_hz=clip.sample_rate_hz,
            cfg=self.cfg,
        )
        return np.hstack([g.compute(batch) for g in self.groups])

    def extract(self, clip: AudioClip) -> List[FeatureVector]:
        """
        提取一个片段的特征向量

        texture_frames == 1 时整段聚合为 1 个向量；
        否则按连续 texture_frames 帧分组 (最后一组可以不满)，每组一个向量。
        """
        per_frame = self.frame_features(clip)
        names = tuple(self.feature_names)

        k = self.cfg.texture_frames
        if k == 1:
            windows = [per_frame]
        else:
            windows = [per_frame[s:s + k] for s in range(0, per_frame.shape[0], k)]

        vectors = []
        for window in windows:
            stats = np.empty(2 * window.shape[1])
            stats[0::2] = window.mean(axis=0)
            stats[1::2] = window.std(axis=0)
            vectors.append(FeatureVector(stats, names, clip.label))
        return vectors


def extract_features(clip: AudioClip, cfg: Optional[AnalysisConfig] = None) -> List[FeatureVector]:
    """便捷函数：用默认特征组提取特征"""
    return FeatureExtractor(cfg).extract(clip)


def feature_names(cfg: Optional[AnalysisConfig] = None) -> List[str]:
    """默认配置下的 58 个特征名"""
    return FeatureExtractor(cfg).feature_names
