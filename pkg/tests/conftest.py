"""
共享测试夹具
"""

import struct
from pathlib import Path
from typing import Callable, Dict, Sequence

import numpy as np
import pytest

from stroke_classifier.dataset import Dataset, write_csv
from stroke_classifier.pipeline import Orchestrator
from stroke_classifier.utils import Colors

# 三个频段互不重叠的击打，少量片段即可完全分开
TINY_SPEC = """\
# tiny corpus for tests
label=low partial_freqs_hz=110,220 partial_amps=1,0.5 decay_s=0.3 noise_level=0.02 duration_s=0.2
label=mid partial_freqs_hz=440,880 partial_amps=1,0.4 decay_s=0.2 noise_level=0.05 duration_s=0.2
label=high partial_freqs_hz=1760,3520 partial_amps=1,0.6 decay_s=0.1 noise_level=0.1 duration_s=0.2
"""

TINY_CLIPS = 8


def pcm16_wav_bytes(frames: Sequence[int], rate_hz: int, channels: int = 1) -> bytes:
    """手工拼出 RIFF/WAVE PCM 16-bit 文件 (frames 为交错的整数样本)"""
    data = struct.pack(f'<{len(frames)}h', *frames)
    fmt_chunk = struct.pack(
        '<HHIIHH', 1, channels, rate_hz, rate_hz * channels * 2, channels * 2, 16
    )
    body = (
        b'WAVE'
        + b'fmt ' + struct.pack('<I', len(fmt_chunk)) + fmt_chunk
        + b'data' + struct.pack('<I', len(data)) + data
    )
    return b'RIFF' + struct.pack('<I', len(body)) + body


@pytest.fixture(autouse=True)
def _restore_console():
    quiet = Colors.quiet
    yield
    Colors.quiet = quiet


@pytest.fixture
def wav_file(tmp_path: Path) -> Callable[..., Path]:
    """写出手工编码的 WAV 文件"""
    def write(name: str, frames: Sequence[int], rate_hz: int = 44100, channels: int = 1) -> Path:
        path = tmp_path / name
        path.write_bytes(pcm16_wav_bytes(frames, rate_hz, channels))
        return path
    return write


@pytest.fixture
def separable() -> Dataset:
    """两类，f0 >= 5 为 b；f1 为噪声"""
    rng = np.random.default_rng(3)
    f0 = np.arange(20, dtype=np.float64) / 2.0
    X = np.column_stack([f0, rng.normal(size=20)])
    y = (f0 >= 5.0).astype(np.int64)
    return Dataset(X, y, ('a', 'b'), ('f0', 'f1'))


@pytest.fixture
def blobs() -> Dataset:
    """三类高斯团，f0/f1 有区分度，f2 为噪声"""
    rng = np.random.default_rng(0)
    n = 30
    X = np.vstack([rng.normal(3.0 * c, 0.6, size=(n, 3)) for c in range(3)])
    X[:, 2] = rng.normal(0.0, 1.0, 3 * n)
    y = np.repeat(np.arange(3), n)
    return Dataset(X, y, ('a', 'b', 'c'), ('f0', 'f1', 'f2'))


@pytest.fixture
def separable_csv(tmp_path: Path) -> Path:
    """每类 10 行、f0 间隔很大的特征表"""
    rng = np.random.default_rng(5)
    X = np.column_stack([
        np.repeat([0.0, 10.0, 20.0], 10) + rng.uniform(0, 1, 30),
        rng.normal(size=30),
    ])
    y = np.repeat(np.arange(3), 10)
    return write_csv(Dataset(X, y, ('ka', 'ti', 'ta'), ('f0', 'f1')), tmp_path / 'toy.csv')


@pytest.fixture(scope='session')
def tiny_corpus(tmp_path_factory) -> Dict[str, Path]:
    """合成 3 类 x 8 个片段并提取特征表 (整个测试会话共用)"""
    root = tmp_path_factory.mktemp('tiny')
    spec_file = root / 'tiny.spec'
    spec_file.write_text(TINY_SPEC, encoding='utf-8')

    orchestrator = Orchestrator(verbose=False)
    corpus = root / 'corpus'
    assert orchestrator.synth(corpus, spec_file, TINY_CLIPS)
    csv = root / 'features.csv'
    assert orchestrator.extract(corpus, csv)
    return {'root': root, 'spec': spec_file, 'corpus': corpus, 'csv': csv}
