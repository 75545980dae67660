"""
File Utilities - 文件操作工具
"""

import shutil
from pathlib import Path
from typing import Dict, List, Optional, Set

# 语料目录中忽略的子目录
DEFAULT_EXCLUDE_DIRS: Set[str] = {
    '.git', '__pycache__', '.venv', 'venv', 'reports', 'models',
}

WAV_SUFFIXES = ('.wav', '.wave')


def find_class_directories(
    root: Path,
    exclude: Optional[Set[str]] = None
) -> List[Path]:
    """
    查找语料根目录下的类别子目录 (每个类别一个目录)

    Args:
        root: 语料根目录
        exclude: 要排除的目录名

    Returns:
        包含 WAV 文件的子目录，按名称排序
    """
    if exclude is None:
        exclude = DEFAULT_EXCLUDE_DIRS

    found: List[Path] = []
    for item in sorted(root.iterdir(), key=lambda p: p.name):
        if not item.is_dir():
            continue
        if item.name in exclude or item.name.startswith('.'):
            continue
        if get_wav_files(item):
            found.append(item)
    return found


def get_wav_files(directory: Path) -> List[Path]:
    """目录下 (不递归) 的 WAV 文件，按文件名排序"""
    return sorted(
        (p for p in directory.iterdir()
         if p.is_file() and p.suffix.lower() in WAV_SUFFIXES),
        key=lambda p: p.name
    )


def collect_labeled_wavs(root: Path) -> Dict[str, List[Path]]:
    """
    收集带标签的 WAV 文件

    Returns:
        {类别名(子目录名): [文件路径, ...]}
    """
    return {d.name: get_wav_files(d) for d in find_class_directories(root)}


class OutputTracker:
    """
    记录一个阶段写出的文件和目录，失败时回滚

    本阶段新建的文件和目录会被删除；阶段开始前已存在的文件恢复为原内容。

    用法:
        with OutputTracker() as tracker:
            tracker.directory(out_dir)
            write(tracker.file(out_dir / 'a.csv'))
    """

    def __init__(self) -> None:
        self.files: List[Path] = []
        self.directories: List[Path] = []
        self._originals: Dict[Path, bytes] = {}

    def file(self, path: Path) -> Path:
        """登记将要写出的文件，并创建其父目录；已存在的文件先保存原内容"""
        path = Path(path)
        self.directory(path.parent)
        if path not in self._originals and path not in self.files and path.is_file():
            self._originals[path] = path.read_bytes()
        self.files.append(path)
        return path

    def directory(self, path: Path) -> Path:
        """创建目录；只登记本阶段新建的目录"""
        path = Path(path)
        missing = []
        current = path
        while not current.exists():
            missing.append(current)
            current = current.parent
        path.mkdir(parents=True, exist_ok=True)
        # 从最外层开始记录，回滚时逆序删除
        self.directories.extend(reversed(missing))
        return path

    def rollback(self) -> None:
        """删除本阶段新建的输出，恢复被覆盖的文件"""
        for path in reversed(self.files):
            if path in self._originals:
                path.write_bytes(self._originals[path])
            elif path.is_file():
                path.unlink()
        for path in reversed(self.directories):
            if path.is_dir():
                shutil.rmtree(path, ignore_errors=True)
        self.files.clear()
        self.directories.clear()
        self._originals.clear()

    def __enter__(self) -> "OutputTracker":
        return self

    def __exit__(self, exc_type, exc, tb) -> bool:
        if exc_type is not None:
            self.rollback()
        return False
