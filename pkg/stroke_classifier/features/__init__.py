"""
Features - 频谱/时域特征提取

使用方式:
    from stroke_classifier.features import AnalysisConfig, extract_features

    vectors = extract_features(clip, AnalysisConfig(texture_frames=1))
    print(len(vectors[0]))  # 58
"""

from .config import AnalysisConfig
from .extractor import (
    DEFAULT_GROUPS,
    FeatureExtractor,
    FeatureGroup,
    FeatureVector,
    FrameBatch,
    extract_features,
    feature_names,
)
from .spectral import (
    PITCH_CLASSES,
    SpectralFrame,
    chroma,
    frame_signal,
    hz_to_mel,
    mel_filterbank,
    mel_to_hz,
    mfcc,
    power_spectrum,
    spectral_centroid,
    spectral_flux,
    spectral_rolloff,
    zero_crossing_rate,
)

__all__ = [
    "AnalysisConfig",
    "DEFAULT_GROUPS",
    "FeatureExtractor",
    "FeatureGroup",
    "FeatureVector",
    "FrameBatch",
    "extract_features",
    "feature_names",
    "PITCH_CLASSES",
    "SpectralFrame",
    "chroma",
    "frame_signal",
    "hz_to_mel",
    "mel_filterbank",
    "mel_to_hz",
    "mfcc",
    "power_spectrum",
    "spectral_centroid",
    "spectral_flux",
    "spectral_rolloff",
    "zero_crossing_rate",
]
