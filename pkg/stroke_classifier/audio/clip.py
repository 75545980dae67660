"""
Audio Clip - 音频片段读写与预处理

只接受 RIFF/WAVE PCM 16-bit (单声道或双声道)。
不做重采样：采样率不一致直接报错。
"""

from dataclasses import dataclass, replace
from pathlib import Path
from typing import Optional, Union

import numpy as np
import soundfile as sf

from ..errors import (
    AudioFileNotFoundError,
    InvalidDurationError,
    MalformedWavError,
    SampleRateMismatchError,
    StrokeClassifierError,
    UnsupportedEncodingError,
)

PCM16_SCALE = 32768.0


@dataclass(frozen=True, eq=False)
class AudioClip:
    """
    单声道音频片段

    Attributes:
        samples: 幅度序列, 取值 [-1, 1]
        sample_rate_hz: 采样率
        label: 击打名称 (bol)，可为空
        source_id: 来源标识 (通常是文件路径)
    """
    samples: np.ndarray
    sample_rate_hz: int
    label: Optional[str] = None
    source_id: str = ""

    def __post_init__(self) -> None:
        samples = np.array(self.samples, dtype=np.float64).reshape(-1)
        if samples.size == 0:
            raise StrokeClassifierError(f"{self.source_id or 'clip'}: no samples")
        if self.sample_rate_hz <= 0:
            raise StrokeClassifierError(
                f"Sample rate must be positive, got {self.sample_rate_hz}"
            )
        if not np.all(np.isfinite(samples)) or np.max(np.abs(samples)) > 1.0:
            raise StrokeClassifierError(
                f"{self.source_id or 'clip'}: amplitudes must be finite and within [-1, 1]"
            )
        samples.setflags(write=False)
        object.__setattr__(self, 'samples', samples)

    @property
    def duration_s(self) -> float:
        return self.samples.size / self.sample_rate_hz

    def __len__(self) -> int:
        return int(self.samples.size)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AudioClip):
            return NotImplemented
        return (
            self.sample_rate_hz == other.sample_rate_hz
            and self.label == other.label
            and np.array_equal(self.samples, other.samples)
        )

    __hash__ = None  # type: ignore[assignment]


def load_wav(
    path: Union[str, Path],
    expected_rate_hz: int,
    label: Optional[str] = None
) -> AudioClip:
    """
    读取 PCM 16-bit WAV 文件

    双声道按逐样本均值混为单声道；整数样本除以 32768 映射到 [-1, 1)。

    Args:
        path: 文件路径
        expected_rate_hz: 期望采样率
        label: 可选的类别标签

    Returns:
        AudioClip

    Raises:
        AudioFileNotFoundError: 文件不存在
        MalformedWavError: 不是合法的 RIFF/WAVE 文件
        UnsupportedEncodingError: 非 PCM 16-bit 或声道数不是 1/2
        SampleRateMismatchError: 采样率不一致
    """
    path = Path(path)
    if not path.is_file():
        raise AudioFileNotFoundError(path)

    try:
        info = sf.info(str(path))
    except RuntimeError as e:  # soundfile.LibsndfileError 是 RuntimeError 的子类
        raise MalformedWavError(f"{path}: malformed RIFF/WAVE header ({e})") from e

    if info.format != 'WAV':
        raise MalformedWavError(f"{path}: not a RIFF/WAVE container ({info.format})")
    if info.subtype != 'PCM_16':
        raise UnsupportedEncodingError(
            f"{path}: unsupported encoding {info.subtype}, only PCM_16 is accepted"
        )
    if info.channels not in (1, 2):
        raise UnsupportedEncodingError(
            f"{path}: {info.channels} channels, only mono or stereo is accepted"
        )
    if info.samplerate != expected_rate_hz:
        raise SampleRateMismatchError(path, info.samplerate, expected_rate_hz)

    try:
        data, _ = sf.read(str(path), dtype='int16', always_2d=True)
    except RuntimeError as e:
        raise MalformedWavError(f"{path}: unreadable sample data ({e})") from e

    if data.shape[0] == 0:
        raise MalformedWavError(f"{path}: no sample frames")

    samples = data.astype(np.float64).mean(axis=1) / PCM16_SCALE
    return AudioClip(samples, int(info.samplerate), label=label, source_id=str(path))


def write_wav(clip: AudioClip, path: Union[str, Path]) -> Path:
    """
    写出单声道 PCM 16-bit WAV

    Args:
        clip: 音频片段
        path: 输出路径

    Returns:
        输出路径
    """
    path = Path(path)
    ints = np.clip(np.round(clip.samples * PCM16_SCALE), -32768, 32767).astype(np.int16)
    sf.write(str(path), ints, clip.sample_rate_hz, subtype='PCM_16', format='WAV')
    return path


def clip_to_duration(clip: AudioClip, duration_s: float) -> AudioClip:
    """
    截断或在尾部补零到固定时长

    Args:
        clip: 输入片段
        duration_s: 目标时长 (秒)

    Returns:
        恰好 round(duration_s * rate) 个样本的片段
    """
    if not duration_s > 0:
        raise InvalidDurationError(f"Duration must be positive, got {duration_s}")

    target = int(round(duration_s * clip.sample_rate_hz))
    if target == len(clip):
        return clip
    if target < len(clip):
        samples = clip.samples[:target]
    else:
        samples = np.concatenate([clip.samples, np.zeros(target - len(clip))])
    return replace(clip, samples=samples)


def peak_normalize(clip: AudioClip) -> AudioClip:
    """峰值归一化到 1.0；全零片段原样返回"""
    peak = float(np.max(np.abs(clip.samples)))
    if peak == 0.0 or peak == 1.0:
        return clip
    return replace(clip, samples=clip.samples / peak)
