"""
Utility Functions - 通用工具函数

提供控制台输出、文件操作等通用功能。
"""

from .console import (
    Colors,
    configure_console,
    print_header,
    print_step,
    print_success,
    print_warning,
    print_error,
    print_info
)
from .file_utils import (
    OutputTracker,
    collect_labeled_wavs,
    find_class_directories,
    get_wav_files,
)

__all__ = [
    # Console
    "Colors",
    "configure_console",
    "print_header",
    "print_step",
    "print_success",
    "print_warning",
    "print_error",
    "print_info",
    # File utils
    "OutputTracker",
    "collect_labeled_wavs",
    "find_class_directories",
    "get_wav_files",
]
