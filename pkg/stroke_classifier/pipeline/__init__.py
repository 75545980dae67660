"""
Pipeline - 配置与各阶段编排
"""

from .config import (
    CONFIG_FILENAME,
    AudioConfig,
    PipelineConfig,
    SplitConfig,
    SynthConfig,
    config_from_dict,
    load_config,
)
from .orchestrator import (
    Evaluation,
    Orchestrator,
    StageResult,
    align_to_model,
    evaluate_model,
    summary_text,
)

__all__ = [
    "CONFIG_FILENAME",
    "AudioConfig",
    "PipelineConfig",
    "SplitConfig",
    "SynthConfig",
    "config_from_dict",
    "load_config",
    "Evaluation",
    "Orchestrator",
    "StageResult",
    "align_to_model",
    "evaluate_model",
    "summary_text",
]
