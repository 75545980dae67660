"""
Analysis Config - 特征分析参数
"""

from dataclasses import dataclass
from typing import Optional

from ..errors import AnalysisConfigError


@dataclass(frozen=True)
class AnalysisConfig:
    """
    短时分析参数

    Attributes:
        frame_len: 帧长 (样本数, 2 的幂)
        hop: 帧移 (样本数, <= frame_len)
        rolloff_fraction: 频谱滚降能量比例
        n_mels: mel 滤波器数
        n_mfcc: MFCC 系数个数 (<= n_mels)
        fmin_hz: mel 滤波器组下界
        fmax_hz: mel 滤波器组上界, None 表示 Nyquist
        chroma_ref_hz: 音高参考 (A4)
        texture_frames: 纹理窗帧数; 1 表示整段聚合
    """
    frame_len: int = 512
    hop: int = 256
    rolloff_fraction: float = 0.85
    n_mels: int = 40
    n_mfcc: int = 13
    fmin_hz: float = 0.0
    fmax_hz: Optional[float] = None
    chroma_ref_hz: float = 440.0
    texture_frames: int = 1

    def mel_bounds(self, sample_rate_hz: int) -> "tuple[float, float]":
        """返回 (fmin, fmax)，fmax 缺省为 Nyquist"""
        fmax = self.fmax_hz if self.fmax_hz is not None else sample_rate_hz / 2.0
        return float(self.fmin_hz), float(fmax)

    def validate(self, sample_rate_hz: Optional[int] = None) -> "AnalysisConfig":
        """
        检查参数不变量

        Args:
            sample_rate_hz: 给出时同时检查 mel 上界不超过 Nyquist

        Returns:
            self，便于链式调用
        """
        if self.frame_len < 2 or self.frame_len & (self.frame_len - 1):
            raise AnalysisConfigError(f"frame_len must be a power of two, got {self.frame_len}")
        if not 0 < self.hop <= self.frame_len:
            raise AnalysisConfigError(
                f"hop must be within (0, frame_len={self.frame_len}], got {self.hop}"
            )
        if not 0.0 < self.rolloff_fraction < 1.0:
            raise AnalysisConfigError(
                f"rolloff_fraction must be within (0, 1), got {self.rolloff_fraction}"
            )
        if self.n_mels < 1 or self.n_mfcc < 1:
            raise AnalysisConfigError("n_mels and n_mfcc must be positive")
        if self.n_mfcc > self.n_mels:
            raise AnalysisConfigError(
                f"n_mfcc ({self.n_mfcc}) must not exceed n_mels ({self.n_mels})"
            )
        if not self.chroma_ref_hz > 0:
            raise AnalysisConfigError(f"chroma_ref_hz must be positive, got {self.chroma_ref_hz}")
        if self.texture_frames < 1:
            raise AnalysisConfigError(
                f"texture_frames must be positive, got {self.texture_frames}"
            )
        if self.fmin_hz < 0:
            raise AnalysisConfigError(f"fmin_hz must be non-negative, got {self.fmin_hz}")
        if sample_rate_hz is not None:
            fmin, fmax = self.mel_bounds(sample_rate_hz)
            if not fmin < fmax <= sample_rate_hz / 2.0:
                raise AnalysisConfigError(
                    f"mel bounds must satisfy fmin < fmax <= Nyquist, got {fmin}..{fmax}"
                )
        return self
