"""
Spectral Features - 帧级频谱/时域特征

每个特征都有两种形式:
- 单帧函数 (zero_crossing_rate, spectral_centroid, ...)，返回标量或短向量
- *_matrix 函数，对一组帧 (n_frames, ...) 向量化计算，供提取器使用

单帧函数只是 *_matrix 的薄封装，两者结果一致。
"""

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence, Union

import numpy as np
from scipy.fft import dct
from scipy.signal import get_window

from ..audio.clip import AudioClip
from ..errors import FrameError
from .config import AnalysisConfig

LOG_FLOOR = 1e-10
CHROMA_MIN_HZ = 20.0
PITCH_CLASSES = ('C', 'C#', 'D', 'D#', 'E', 'F', 'F#', 'G', 'G#', 'A', 'A#', 'B')

ArrayLike = Union[np.ndarray, Sequence[float]]


@dataclass(frozen=True, eq=False)
class SpectralFrame:
    """
    一帧的幅度谱 (bins 0..N/2)

    Attributes:
        magnitudes: 非负幅度
        sample_rate_hz: 采样率；第 k 个 bin 的频率为 k * rate / frame_len
    """
    magnitudes: np.ndarray
    sample_rate_hz: int

    def __post_init__(self) -> None:
        mags = np.asarray(self.magnitudes, dtype=np.float64).reshape(-1)
        if mags.size < 2:
            raise FrameError("A spectrum needs at least 2 bins")
        if np.any(mags < 0):
            raise FrameError("Spectral magnitudes must be non-negative")
        object.__setattr__(self, 'magnitudes', mags)

    @property
    def n_bins(self) -> int:
        return int(self.magnitudes.size)

    @property
    def frame_len(self) -> int:
        return 2 * (self.n_bins - 1)

    @property
    def frequencies(self) -> np.ndarray:
        return bin_frequencies(self.n_bins, self.sample_rate_hz)


# ---------------------------------------------------------------- framing / FFT

def frame_signal(clip: Union[AudioClip, np.ndarray], cfg: AnalysisConfig) -> np.ndarray:
    """
    分帧

    帧起点为 hop 的整数倍；若末尾有剩余样本，追加一帧尾部补零的帧。

    Args:
        clip: AudioClip 或样本数组
        cfg: 分析参数

    Returns:
        (n_frames, frame_len) 数组
    """
    samples = clip.samples if isinstance(clip, AudioClip) else np.asarray(clip, dtype=np.float64)
    n, size, hop = samples.size, cfg.frame_len, cfg.hop
    if n < size:
        raise FrameError(f"Clip has {n} samples, shorter than one frame ({size})")

    n_full = (n - size) // hop + 1
    frames = np.lib.stride_tricks.sliding_window_view(samples, size)[::hop][:n_full]
    covered = (n_full - 1) * hop + size
    if covered < n:
        tail = np.zeros(size)
        rest = samples[n_full * hop:]
        tail[:rest.size] = rest
        frames = np.vstack([frames, tail])
    return np.array(frames, dtype=np.float64)


@lru_cache(maxsize=16)
def hann_window(size: int) -> np.ndarray:
    """周期 Hann 窗 (只读)"""
    window = get_window('hann', size)
    window.setflags(write=False)
    return window


@lru_cache(maxsize=16)
def _bin_frequencies(n_bins: int, sample_rate_hz: int) -> np.ndarray:
    freqs = np.arange(n_bins) * sample_rate_hz / (2.0 * (n_bins - 1))
    freqs.setflags(write=False)
    return freqs


def bin_frequencies(n_bins: int, sample_rate_hz: int) -> np.ndarray:
    """各 bin 的中心频率 (Hz)"""
    return _bin_frequencies(int(n_bins), int(sample_rate_hz))


def magnitude_matrix(frames: np.ndarray) -> np.ndarray:
    """加 Hann 窗后做实数 FFT，返回 (n_frames, frame_len/2 + 1) 的幅度"""
    frames = np.atleast_2d(frames)
    return np.abs(np.fft.rfft(frames * hann_window(frames.shape[-1]), axis=-1))


def power_spectrum(
    frame: ArrayLike,
    sample_rate_hz: int,
    frame_len: Optional[int] = None
) -> SpectralFrame:
    """
    单帧频谱

    Args:
        frame: 一帧样本
        sample_rate_hz: 采样率
        frame_len: 期望帧长；给出时检查

    Returns:
        SpectralFrame (Hann 窗, bins 0..N/2 的模)
    """
    frame = np.asarray(frame, dtype=np.float64).reshape(-1)
    if frame_len is not None and frame.size != frame_len:
        raise FrameError(f"Expected a frame of {frame_len} samples, got {frame.size}")
    if frame.size < 2:
        raise FrameError("A frame needs at least 2 samples")
    return SpectralFrame(magnitude_matrix(frame)[0], sample_rate_hz)


# ---------------------------------------------------------------- temporal

def zero_crossing_rate_matrix(frames: np.ndarray) -> np.ndarray:
    """每帧过零率；0 视为非负"""
    frames = np.atleast_2d(frames)
    signs = frames >= 0
    changes = np.count_nonzero(signs[:, 1:] != signs[:, :-1], axis=1)
    return changes / (frames.shape[1] - 1)


def zero_crossing_rate(frame: ArrayLike) -> float:
    """
    过零率 = 符号变化次数 / (帧长 - 1)

    Args:
        frame: 至少 2 个样本
    """
    frame = np.asarray(frame, dtype=np.float64).reshape(-1)
    if frame.size < 2:
        raise FrameError("Zero-crossing rate needs at least 2 samples")
    return float(zero_crossing_rate_matrix(frame)[0])


# ---------------------------------------------------------------- spectral shape

def centroid_matrix(mags: np.ndarray, freqs: np.ndarray) -> np.ndarray:
    mags = np.atleast_2d(mags)
    total = mags.sum(axis=1)
    weighted = mags @ freqs
    safe = np.where(total > 0, total, 1.0)
    return np.where(total > 0, weighted / safe, 0.0)


def spectral_centroid(spec: SpectralFrame) -> float:
    """幅度加权平均频率；全零谱返回 0"""
    return float(centroid_matrix(spec.magnitudes, spec.frequencies)[0])


def rolloff_matrix(mags: np.ndarray, freqs: np.ndarray, fraction: float) -> np.ndarray:
    mags = np.atleast_2d(mags)
    cumulative = np.cumsum(mags ** 2, axis=1)
    total = cumulative[:, -1]
    reached = cumulative >= (fraction * total)[:, None]
    index = np.argmax(reached, axis=1)
    return np.where(total > 0, freqs[index], 0.0)


def spectral_rolloff(spec: SpectralFrame, fraction: float) -> float:
    """
    滚降频率: 累计能量首次达到 fraction * 总能量的最小 bin 的频率

    Args:
        spec: 频谱
        fraction: (0, 1)

    Returns:
        Hz；全零谱返回 0
    """
    if not 0.0 < fraction < 1.0:
        raise FrameError(f"Roll-off fraction must be within (0, 1), got {fraction}")
    return float(rolloff_matrix(spec.magnitudes, spec.frequencies, fraction)[0])


def _l1_normalize(mags: np.ndarray) -> np.ndarray:
    total = mags.sum(axis=-1, keepdims=True)
    return np.divide(mags, total, out=np.zeros_like(mags), where=total > 0)


def flux_matrix(mags: np.ndarray) -> np.ndarray:
    """相邻帧 L1 归一化谱之差的欧氏范数；第一帧与全零谱相比"""
    normed = _l1_normalize(np.atleast_2d(mags))
    previous = np.vstack([np.zeros_like(normed[:1]), normed[:-1]])
    return np.sqrt(np.sum((normed - previous) ** 2, axis=1))


def spectral_flux(cur: SpectralFrame, prev: SpectralFrame) -> float:
    """两帧之间的频谱通量 (对称, 非负)"""
    if cur.n_bins != prev.n_bins:
        raise FrameError(f"Bin count mismatch: {cur.n_bins} vs {prev.n_bins}")
    diff = _l1_normalize(cur.magnitudes) - _l1_normalize(prev.magnitudes)
    return float(np.sqrt(np.sum(diff ** 2)))


# ---------------------------------------------------------------- MFCC

def hz_to_mel(hz: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
    """HTK mel 刻度: 2595 * log10(1 + f / 700)"""
    return 2595.0 * np.log10(1.0 + np.asarray(hz, dtype=np.float64) / 700.0)


def mel_to_hz(mel: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
    return 700.0 * (10.0 ** (np.asarray(mel, dtype=np.float64) / 2595.0) - 1.0)


@lru_cache(maxsize=16)
def mel_filterbank(
    n_bins: int,
    sample_rate_hz: int,
    n_mels: int,
    fmin_hz: float,
    fmax_hz: float
) -> np.ndarray:
    """
    三角 mel 滤波器组

    Returns:
        (n_mels, n_bins) 权重矩阵 (只读)
    """
    freqs = bin_frequencies(n_bins, sample_rate_hz)
    edges = mel_to_hz(np.linspace(hz_to_mel(fmin_hz), hz_to_mel(fmax_hz), n_mels + 2))
    lower, center, upper = edges[:-2, None], edges[1:-1, None], edges[2:, None]
    rising = (freqs[None, :] - lower) / (center - lower)
    falling = (upper - freqs[None, :]) / (upper - center)
    weights = np.maximum(0.0, np.minimum(rising, falling))
    weights.setflags(write=False)
    return weights


def mfcc_matrix(mags: np.ndarray, sample_rate_hz: int, cfg: AnalysisConfig) -> np.ndarray:
    """功率谱 -> mel 能量 -> log (下限 1e-10) -> 正交 DCT-II"""
    mags = np.atleast_2d(mags)
    fmin, fmax = cfg.mel_bounds(sample_rate_hz)
    fb = mel_filterbank(mags.shape[1], int(sample_rate_hz), cfg.n_mels, fmin, fmax)
    energies = (mags ** 2) @ fb.T
    log_energies = np.log(np.maximum(energies, LOG_FLOOR))
    return dct(log_energies, type=2, norm='ortho', axis=1)[:, :cfg.n_mfcc]


def mfcc(spec: SpectralFrame, cfg: AnalysisConfig) -> np.ndarray:
    """
    单帧 MFCC

    Args:
        spec: 频谱
        cfg: 分析参数 (n_mels, n_mfcc, fmin/fmax)

    Returns:
        n_mfcc 个系数
    """
    cfg.validate(spec.sample_rate_hz)
    return mfcc_matrix(spec.magnitudes, spec.sample_rate_hz, cfg)[0]


# ---------------------------------------------------------------- chroma

@lru_cache(maxsize=16)
def chroma_map(n_bins: int, sample_rate_hz: int, ref_hz: float) -> np.ndarray:
    """
    bin -> 音级 的 0/1 映射矩阵 (n_bins, 12)，9 号音级为 A；20 Hz 以下的 bin 不参与
    """
    freqs = bin_frequencies(n_bins, sample_rate_hz)
    mapping = np.zeros((n_bins, 12))
    audible = freqs > CHROMA_MIN_HZ
    semitones = np.round(12.0 * np.log2(freqs[audible] / ref_hz)).astype(int)
    mapping[np.flatnonzero(audible), (semitones + 9) % 12] = 1.0
    mapping.setflags(write=False)
    return mapping


def chroma_matrix(mags: np.ndarray, sample_rate_hz: int, cfg: AnalysisConfig) -> np.ndarray:
    mags = np.atleast_2d(mags)
    profile = mags @ chroma_map(mags.shape[1], int(sample_rate_hz), float(cfg.chroma_ref_hz))
    norm = np.linalg.norm(profile, axis=1, keepdims=True)
    return np.divide(profile, norm, out=np.zeros_like(profile), where=norm > 0)


def chroma(spec: SpectralFrame, cfg: AnalysisConfig) -> np.ndarray:
    """12 维音级能量，L2 归一化 (全零除外)"""
    if not cfg.chroma_ref_hz > 0:
        raise FrameError(f"chroma_ref_hz must be positive, got {cfg.chroma_ref_hz}")
    return chroma_matrix(spec.magnitudes, spec.sample_rate_hz, cfg)[0]
