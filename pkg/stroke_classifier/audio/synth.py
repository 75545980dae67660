"""
Stroke Synthesis - 合成击打语料

用指数衰减正弦分音加噪声模拟塔布拉鼓击打 (bol)，
在没有真实录音的情况下复现 13 类击打及 ti/ta 的重叠现象。

语料描述文件格式 (每行一个击打, key=value, 列表用逗号分隔):

    label=ti partial_freqs_hz=277.18,554.37 partial_amps=0.6,0.8 decay_s=0.09 noise_level=0.18 duration_s=0.3
"""

import math
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np

from ..errors import StrokeSpecError
from .clip import AudioClip

# 鼓面调到 C#
TONIC_HZ = 277.18


@dataclass(frozen=True)
class StrokeSpec:
    """
    单个击打的合成参数

    Attributes:
        label: 击打名称
        partial_freqs_hz: 分音频率
        partial_amps: 分音幅度 (与频率等长)
        decay_s: 包络衰减时间常数, 可为 inf
        noise_level: 噪声幅度 [0, 1]
        duration_s: 时长 (0, 1]
        noise_decay_s: 噪声包络衰减时间常数; None 表示平稳噪声
    """
    label: str
    partial_freqs_hz: Tuple[float, ...]
    partial_amps: Tuple[float, ...]
    decay_s: float
    noise_level: float = 0.0
    duration_s: float = 0.5
    noise_decay_s: Optional[float] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, 'partial_freqs_hz', tuple(float(f) for f in self.partial_freqs_hz))
        object.__setattr__(self, 'partial_amps', tuple(float(a) for a in self.partial_amps))

    def validate(self, rate_hz: Optional[int] = None) -> None:
        """
        检查参数不变量

        Args:
            rate_hz: 目标采样率；给出时检查所有分音低于 Nyquist
        """
        if not self.label:
            raise StrokeSpecError("Stroke label must not be empty")
        if len(self.partial_freqs_hz) == 0:
            raise StrokeSpecError(f"{self.label}: at least one partial is required")
        if len(self.partial_freqs_hz) != len(self.partial_amps):
            raise StrokeSpecError(
                f"{self.label}: {len(self.partial_freqs_hz)} frequencies "
                f"but {len(self.partial_amps)} amplitudes"
            )
        if any(not f > 0 for f in self.partial_freqs_hz):
            raise StrokeSpecError(f"{self.label}: partial frequencies must be positive")
        if any(not a > 0 for a in self.partial_amps):
            raise StrokeSpecError(f"{self.label}: partial amplitudes must be positive")
        if not self.decay_s > 0:
            raise StrokeSpecError(f"{self.label}: decay_s must be positive")
        if self.noise_decay_s is not None and not self.noise_decay_s > 0:
            raise StrokeSpecError(f"{self.label}: noise_decay_s must be positive")
        if not 0.0 <= self.noise_level <= 1.0:
            raise StrokeSpecError(f"{self.label}: noise_level must be within [0, 1]")
        if not 0.0 < self.duration_s <= 1.0:
            raise StrokeSpecError(f"{self.label}: duration_s must be within (0, 1]")
        if rate_hz is not None:
            nyquist = rate_hz / 2.0
            for f in self.partial_freqs_hz:
                if f >= nyquist:
                    raise StrokeSpecError(
                        f"{self.label}: partial {f} Hz is at or above Nyquist ({nyquist} Hz)"
                    )


@dataclass(frozen=True)
class StrokeVariation:
    """
    语料生成时每个片段的随机扰动幅度

    全部为 0 时，每个片段与 synthesize_stroke 的输出一致 (仅噪声种子不同)。
    """
    detune_cents: float = 12.0
    amp_jitter: float = 0.15
    decay_jitter: float = 0.15
    noise_jitter: float = 0.2

    @property
    def is_zero(self) -> bool:
        return not any((self.detune_cents, self.amp_jitter, self.decay_jitter, self.noise_jitter))


def synthesize_stroke(spec: StrokeSpec, rate_hz: int, seed: int) -> AudioClip:
    """
    渲染一个击打

    分音为零相位正弦乘以 exp(-t / decay_s)，加上种子确定的均匀噪声
    (幅度 noise_level)，最后峰值归一化。

    Args:
        spec: 合成参数
        rate_hz: 采样率
        seed: 噪声种子

    Returns:
        AudioClip，标签为 spec.label
    """
    spec.validate(rate_hz)

    n = max(1, int(round(spec.duration_s * rate_hz)))
    t = np.arange(n, dtype=np.float64) / rate_hz

    signal = np.zeros(n)
    envelope = np.exp(-t / spec.decay_s)
    for freq, amp in zip(spec.partial_freqs_hz, spec.partial_amps):
        signal += amp * np.sin(2.0 * np.pi * freq * t)
    signal *= envelope

    rng = np.random.default_rng(seed)
    noise = rng.uniform(-1.0, 1.0, n) * spec.noise_level
    if spec.noise_decay_s is not None:
        noise *= np.exp(-t / spec.noise_decay_s)
    signal += noise

    peak = np.max(np.abs(signal))
    if peak > 0:
        signal = signal / peak
    return AudioClip(signal, rate_hz, label=spec.label, source_id=f"synth:{spec.label}:{seed}")


def vary_stroke(
    spec: StrokeSpec,
    rng: np.random.Generator,
    variation: StrokeVariation,
    rate_hz: int
) -> StrokeSpec:
    """
    生成一个带随机扰动的击打参数 (模拟不同演奏者/不同次击打)

    Args:
        spec: 类别基准参数
        rng: 随机数生成器
        variation: 扰动幅度
        rate_hz: 采样率 (扰动后的分音保持低于 Nyquist)

    Returns:
        新的 StrokeSpec
    """
    k = len(spec.partial_freqs_hz)
    # 整体移调 + 各分音独立微调
    shift = rng.normal(0.0, variation.detune_cents)
    cents = shift + rng.normal(0.0, variation.detune_cents / 3.0, k)
    ceiling = rate_hz / 2.0 * 0.99
    freqs = np.minimum(np.asarray(spec.partial_freqs_hz) * 2.0 ** (cents / 1200.0), ceiling)
    amps = np.asarray(spec.partial_amps) * rng.lognormal(0.0, variation.amp_jitter, k)

    decay = spec.decay_s
    if math.isfinite(decay):
        decay *= float(rng.lognormal(0.0, variation.decay_jitter))
    noise = spec.noise_level * float(rng.lognormal(0.0, variation.noise_jitter))

    return replace(
        spec,
        partial_freqs_hz=tuple(freqs),
        partial_amps=tuple(amps),
        decay_s=decay,
        noise_level=min(noise, 1.0),
    )


def generate_corpus(
    specs: Sequence[StrokeSpec],
    clips_per_class: int,
    rate_hz: int,
    seed: int,
    variation: Optional[StrokeVariation] = None
) -> Iterator[Tuple[int, AudioClip]]:
    """
    按类别顺序生成语料

    第 c 类的第 i 个片段只依赖 (seed, c, i)，与生成顺序无关。

    Args:
        specs: 各类别基准参数 (标签唯一)
        clips_per_class: 每类片段数
        rate_hz: 采样率
        seed: 随机种子 (非负)
        variation: 片段扰动，None 表示不扰动

    Yields:
        (类内序号, AudioClip)
    """
    if clips_per_class < 1:
        raise StrokeSpecError(f"clips_per_class must be positive, got {clips_per_class}")
    if seed < 0:
        raise StrokeSpecError(f"seed must be non-negative, got {seed}")
    labels = [s.label for s in specs]
    if len(set(labels)) != len(labels):
        raise StrokeSpecError("Stroke labels must be unique")

    for c, spec in enumerate(specs):
        spec.validate(rate_hz)
        for i in range(clips_per_class):
            rng = np.random.default_rng([seed, c, i])
            variant = spec
            if variation is not None and not variation.is_zero:
                variant = vary_stroke(spec, rng, variation, rate_hz)
            noise_seed = int(rng.integers(0, 2**31 - 1))
            yield i, synthesize_stroke(variant, rate_hz, noise_seed)


def parse_stroke_specs(text: str, source: str = "<string>") -> List[StrokeSpec]:
    """
    解析语料描述文本

    Args:
        text: 文件内容; '#' 之后为注释
        source: 出错时报告的来源名

    Returns:
        StrokeSpec 列表 (文件顺序)
    """
    specs: List[StrokeSpec] = []
    seen = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue
        fields: Dict[str, str] = {}
        for token in line.split():
            key, sep, value = token.partition('=')
            if not sep or not value:
                raise StrokeSpecError(f"{source}:{lineno}: expected key=value, got {token!r}")
            fields[key] = value
        spec = _spec_from_fields(fields, f"{source}:{lineno}")
        if spec.label in seen:
            raise StrokeSpecError(f"{source}:{lineno}: duplicate stroke label {spec.label!r}")
        seen.add(spec.label)
        spec.validate()
        specs.append(spec)

    if not specs:
        raise StrokeSpecError(f"{source}: no stroke specs found")
    return specs


def load_stroke_specs(path: Union[str, Path]) -> List[StrokeSpec]:
    """读取语料描述文件"""
    path = Path(path)
    if not path.is_file():
        raise StrokeSpecError(f"Stroke spec file does not exist: {path}")
    return parse_stroke_specs(path.read_text(encoding='utf-8'), source=str(path))


def format_stroke_spec(spec: StrokeSpec) -> str:
    """把 StrokeSpec 写成一行 key=value"""
    parts = [
        f"label={spec.label}",
        "partial_freqs_hz=" + ",".join(repr(f) for f in spec.partial_freqs_hz),
        "partial_amps=" + ",".join(repr(a) for a in spec.partial_amps),
        f"decay_s={spec.decay_s!r}",
        f"noise_level={spec.noise_level!r}",
        f"duration_s={spec.duration_s!r}",
    ]
    if spec.noise_decay_s is not None:
        parts.append(f"noise_decay_s={spec.noise_decay_s!r}")
    return " ".join(parts)


_REQUIRED_KEYS = ('label', 'partial_freqs_hz', 'partial_amps', 'decay_s')
_KNOWN_KEYS = set(_REQUIRED_KEYS) | {'noise_level', 'duration_s', 'noise_decay_s'}


def _spec_from_fields(fields: Dict[str, str], where: str) -> StrokeSpec:
    unknown = set(fields) - _KNOWN_KEYS
    if unknown:
        raise StrokeSpecError(f"{where}: unknown key(s) {sorted(unknown)}")
    missing = [k for k in _REQUIRED_KEYS if k not in fields]
    if missing:
        raise StrokeSpecError(f"{where}: missing key(s) {missing}")

    try:
        kwargs = {
            'label': fields['label'],
            'partial_freqs_hz': _floats(fields['partial_freqs_hz']),
            'partial_amps': _floats(fields['partial_amps']),
            'decay_s': float(fields['decay_s']),
        }
        if 'noise_level' in fields:
            kwargs['noise_level'] = float(fields['noise_level'])
        if 'duration_s' in fields:
            kwargs['duration_s'] = float(fields['duration_s'])
        if 'noise_decay_s' in fields:
            kwargs['noise_decay_s'] = float(fields['noise_decay_s'])
    except ValueError as e:
        raise StrokeSpecError(f"{where}: {e}") from e
    return StrokeSpec(**kwargs)


def _floats(value: str) -> Tuple[float, ...]:
    return tuple(float(v) for v in value.split(',') if v)


def _harmonics(ratios: Sequence[float], base: float = TONIC_HZ) -> Tuple[float, ...]:
    return tuple(round(base * r, 2) for r in ratios)


# 默认 13 类击打。ti 与 ta 共用同一组分音，只在衰减和噪声上不同。
DEFAULT_PRESET: Tuple[StrokeSpec, ...] = (
    # bayaan (低音鼓)
    StrokeSpec('ge', (98.0, 196.0, 294.0), (1.0, 0.4, 0.15), 0.35, 0.03, 0.5, 0.02),
    StrokeSpec('ka', (130.0, 260.0), (1.0, 0.5), 0.03, 0.35, 0.3, 0.02),
    # dayaan (高音鼓)
    StrokeSpec('na', _harmonics((1, 2, 3, 4)), (1.0, 0.6, 0.45, 0.3), 0.3, 0.05, 0.5, 0.01),
    StrokeSpec('tu', _harmonics((1, 2)), (1.0, 0.2), 0.4, 0.02, 0.5, 0.01),
    StrokeSpec('ti', _harmonics((1, 2, 3, 4, 5)), (0.6, 0.8, 0.7, 0.5, 0.4), 0.09, 0.18, 0.3, 0.03),
    StrokeSpec('ta', _harmonics((1, 2, 3, 4, 5)), (0.6, 0.8, 0.7, 0.5, 0.4), 0.12, 0.13, 0.3, 0.04),
    StrokeSpec('ne', _harmonics((2, 3, 5)), (1.0, 0.6, 0.4), 0.06, 0.1, 0.3, 0.02),
    StrokeSpec('te', _harmonics((3, 4, 6)), (1.0, 0.8, 0.5), 0.04, 0.3, 0.3, 0.02),
    StrokeSpec('tra', _harmonics((1.5, 3, 4.5)), (1.0, 0.7, 0.5), 0.05, 0.4, 0.3, 0.03),
    StrokeSpec('din', (110.0,) + _harmonics((1, 2)), (0.5, 1.0, 0.4), 0.3, 0.04, 0.5, 0.01),
    # 双手同时
    StrokeSpec('dha', (98.0, 196.0) + _harmonics((1, 2, 3)), (1.0, 0.4, 0.8, 0.5, 0.35), 0.4, 0.04, 0.5, 0.01),
    StrokeSpec('dhin', (82.0, 164.0) + _harmonics((1, 3)), (0.9, 0.3, 0.9, 0.3), 0.45, 0.03, 0.5, 0.01),
    StrokeSpec('tin', _harmonics((1, 3, 4)), (1.0, 0.5, 0.4), 0.35, 0.03, 0.5, 0.01),
)

# 故意重叠的一对
OVERLAPPING_PAIR: Tuple[str, str] = ('ti', 'ta')


def default_preset_text() -> str:
    """默认语料描述 (可写出后手工修改)"""
    header = "# tabla stroke preset, dayaan tuned to C# (277.18 Hz)\n"
    return header + "\n".join(format_stroke_spec(s) for s in DEFAULT_PRESET) + "\n"
