"""
Audio - 音频读取、预处理与合成

使用方式:
    from stroke_classifier.audio import load_wav, clip_to_duration, peak_normalize

    clip = load_wav('strokes/ti/ti_001.wav', expected_rate_hz=44100)
    clip = peak_normalize(clip_to_duration(clip, 0.5))
"""

from .clip import (
    AudioClip,
    clip_to_duration,
    load_wav,
    peak_normalize,
    write_wav,
)
from .synth import (
    DEFAULT_PRESET,
    OVERLAPPING_PAIR,
    StrokeSpec,
    StrokeVariation,
    default_preset_text,
    format_stroke_spec,
    generate_corpus,
    load_stroke_specs,
    parse_stroke_specs,
    synthesize_stroke,
    vary_stroke,
)

__all__ = [
    "AudioClip",
    "clip_to_duration",
    "load_wav",
    "peak_normalize",
    "write_wav",
    "DEFAULT_PRESET",
    "OVERLAPPING_PAIR",
    "StrokeSpec",
    "StrokeVariation",
    "default_preset_text",
    "format_stroke_spec",
    "generate_corpus",
    "load_stroke_specs",
    "parse_stroke_specs",
    "synthesize_stroke",
    "vary_stroke",
]
