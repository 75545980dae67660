"""
Configuration Parser - 配置解析器

解析 .tsc.yaml 配置文件。所有段都是可选的:

    analysis: {frame_len: 512, hop: 256, texture_frames: 1, ...}
    tree:     {criterion: gini, max_depth: null, min_leaf: 1, min_gain: 0.0, id3_bins: 8}
    forest:   {n_trees: 100, mtry: null, criterion: gini, bootstrap: true, compute_oob: false, n_jobs: 1}
    split:    {train_fraction: 0.7, split_seed: 42}
    audio:    {sample_rate_hz: 44100, clip_duration_s: 0.5, short_strokes: [...], ...}
    synth:    {clips_per_class: 50, detune_cents: 12.0, ...}
    seed: 7

优先级: 命令行参数 > 配置文件 > 默认值
"""

from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Any, Dict, Optional, Tuple, Type, TypeVar

import yaml

from ..audio.synth import OVERLAPPING_PAIR, StrokeVariation
from ..errors import ConfigError
from ..features.config import AnalysisConfig
from ..learners.forest import ForestParams
from ..learners.tree import TreeParams

# 配置文件名
CONFIG_FILENAME = ".tsc.yaml"

# 共振时间短的击打，提取时截取到 short_duration_s
DEFAULT_SHORT_STROKES = ('ka', 'ti', 'ta', 'ne', 'te', 'tra')


@dataclass(frozen=True)
class SplitConfig:
    """训练/测试划分"""
    train_fraction: float = 0.7
    split_seed: int = 42


@dataclass(frozen=True)
class AudioConfig:
    """音频预处理"""
    sample_rate_hz: int = 44100
    clip_duration_s: float = 0.5
    short_strokes: Tuple[str, ...] = DEFAULT_SHORT_STROKES
    short_duration_s: float = 0.3
    normalize: bool = True

    def duration_for(self, label: str) -> float:
        return self.short_duration_s if label in self.short_strokes else self.clip_duration_s


@dataclass(frozen=True)
class SynthConfig:
    """语料合成"""
    clips_per_class: int = 50
    variation: StrokeVariation = field(default_factory=StrokeVariation)


@dataclass(frozen=True)
class PipelineConfig:
    """
    流水线配置

    Attributes:
        analysis: 特征分析参数
        tree: 决策树参数 (cart / id3)
        forest: 随机森林参数 (seed 由 seed 字段覆盖)
        split: 划分参数
        audio: 音频预处理参数
        synth: 语料合成参数
        seed: 学习器和合成器的随机种子
        overlapping_pair: 报告中单独列出的易混淆类别对
    """
    analysis: AnalysisConfig = field(default_factory=AnalysisConfig)
    tree: TreeParams = field(default_factory=TreeParams)
    forest: ForestParams = field(default_factory=ForestParams)
    split: SplitConfig = field(default_factory=SplitConfig)
    audio: AudioConfig = field(default_factory=AudioConfig)
    synth: SynthConfig = field(default_factory=SynthConfig)
    seed: int = 7
    overlapping_pair: Tuple[str, str] = OVERLAPPING_PAIR

    def forest_params(self) -> ForestParams:
        """带上全局 seed 的森林参数"""
        return replace(self.forest, seed=self.seed)


T = TypeVar('T')

_SECTIONS = ('analysis', 'tree', 'forest', 'split', 'audio', 'synth')
_TOP_LEVEL = set(_SECTIONS) | {'seed', 'overlapping_pair'}


def _build(cls: Type[T], section: str, data: Any, **extra: Any) -> T:
    """用配置段构造 dataclass，未知键报错"""
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigError(f"Section '{section}' must be a mapping")
    known = {f.name for f in fields(cls)}  # type: ignore[arg-type]
    for key in data:
        if key not in known or key in extra:
            raise ConfigError(f"Unknown key '{section}.{key}'")
    try:
        return cls(**{**data, **extra})
    except TypeError as e:
        raise ConfigError(f"Invalid section '{section}': {e}") from e


def _split_keys(section: str, data: Any, keys: Tuple[str, ...]) -> Tuple[Dict[str, Any], Dict[str, Any]]:
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigError(f"Section '{section}' must be a mapping")
    picked = {k: data[k] for k in keys if k in data}
    rest = {k: v for k, v in data.items() if k not in keys}
    return picked, rest


def config_from_dict(data: Dict[str, Any]) -> PipelineConfig:
    """
    由 YAML 字典构造配置

    Raises:
        ConfigError: 未知键或取值类型错误
    """
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigError("Configuration must be a mapping")
    for key in data:
        if key not in _TOP_LEVEL:
            raise ConfigError(f"Unknown key '{key}'")

    # forest.criterion 属于每棵树的参数
    tree_keys, forest_data = _split_keys('forest', data.get('forest'), ('criterion',))
    if 'seed' in forest_data:
        raise ConfigError("Unknown key 'forest.seed' (use the top-level 'seed')")
    forest_tree = _build(TreeParams, 'forest', tree_keys)

    audio_data = data.get('audio')
    if isinstance(audio_data, dict) and 'short_strokes' in audio_data:
        audio_data = {**audio_data, 'short_strokes': tuple(audio_data['short_strokes'] or ())}

    variation_keys = tuple(f.name for f in fields(StrokeVariation))
    variation_data, synth_data = _split_keys('synth', data.get('synth'), variation_keys)

    pair = data.get('overlapping_pair', OVERLAPPING_PAIR)
    if not isinstance(pair, (list, tuple)) or len(pair) != 2:
        raise ConfigError("overlapping_pair must list exactly two class names")

    try:
        seed = int(data.get('seed', 7))
    except (TypeError, ValueError) as e:
        raise ConfigError(f"seed must be an integer: {e}") from e

    return PipelineConfig(
        analysis=_build(AnalysisConfig, 'analysis', data.get('analysis')),
        tree=_build(TreeParams, 'tree', data.get('tree')),
        forest=_build(ForestParams, 'forest', forest_data, tree_params=forest_tree),
        split=_build(SplitConfig, 'split', data.get('split')),
        audio=_build(AudioConfig, 'audio', audio_data),
        synth=_build(
            SynthConfig, 'synth', synth_data,
            variation=_build(StrokeVariation, 'synth', variation_data),
        ),
        seed=seed,
        overlapping_pair=(str(pair[0]), str(pair[1])),
    )


def load_config(config_file: Optional[Path] = None, search_dir: Optional[Path] = None) -> PipelineConfig:
    """
    加载配置

    优先级：
    1. 显式给出的配置文件 (不存在则报错)
    2. search_dir (默认当前目录) 下的 .tsc.yaml
    3. 默认配置

    Args:
        config_file: 配置文件路径
        search_dir: 查找默认配置文件的目录

    Returns:
        流水线配置
    """
    if config_file is not None:
        config_file = Path(config_file)
        if not config_file.is_file():
            raise ConfigError(f"Config file does not exist: {config_file}")
        return _load_yaml_config(config_file)

    default_file = Path(search_dir or Path.cwd()) / CONFIG_FILENAME
    if default_file.is_file():
        return _load_yaml_config(default_file)
    return PipelineConfig()


def _load_yaml_config(config_file: Path) -> PipelineConfig:
    """加载 YAML 配置文件"""
    try:
        with open(config_file, 'r', encoding='utf-8') as f:
            data = yaml.safe_load(f) or {}
    except yaml.YAMLError as e:
        raise ConfigError(f"{config_file}: invalid YAML: {e}") from e
    try:
        return config_from_dict(data)
    except ConfigError as e:
        raise ConfigError(f"{config_file}: {e}") from e
