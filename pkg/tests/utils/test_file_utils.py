import pytest

from stroke_classifier.utils import (
    Colors,
    OutputTracker,
    collect_labeled_wavs,
    find_class_directories,
    get_wav_files,
    print_error,
    print_info,
)


def _touch(path):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(b'')
    return path


class TestClassDirectories:
    def test_only_directories_with_wavs(self, tmp_path):
        _touch(tmp_path / 'ti' / 'ti_001.wav')
        _touch(tmp_path / 'ka' / 'ka_001.WAV')
        _touch(tmp_path / 'notes' / 'readme.txt')
        _touch(tmp_path / '.hidden' / 'x.wav')
        _touch(tmp_path / 'models' / 'x.wav')
        _touch(tmp_path / 'loose.wav')
        assert [d.name for d in find_class_directories(tmp_path)] == ['ka', 'ti']

    def test_wavs_sorted_by_name(self, tmp_path):
        for name in ('b.wav', 'a.wave', 'c.txt'):
            _touch(tmp_path / name)
        (tmp_path / 'sub.wav').mkdir()
        assert [p.name for p in get_wav_files(tmp_path)] == ['a.wave', 'b.wav']

    def test_collect_labeled(self, tmp_path):
        _touch(tmp_path / 'na' / 'na_002.wav')
        _touch(tmp_path / 'na' / 'na_001.wav')
        labeled = collect_labeled_wavs(tmp_path)
        assert list(labeled) == ['na']
        assert [p.name for p in labeled['na']] == ['na_001.wav', 'na_002.wav']


class TestOutputTracker:
    def test_rollback_removes_new_outputs_only(self, tmp_path):
        existing = _touch(tmp_path / 'keep' / 'old.txt')
        with pytest.raises(RuntimeError):
            with OutputTracker() as tracker:
                tracker.file(tmp_path / 'keep' / 'new.txt').write_text('x')
                out = tracker.directory(tmp_path / 'a' / 'b')
                tracker.file(out / 'c.csv').write_text('y')
                raise RuntimeError('boom')
        assert existing.is_file()
        assert not (tmp_path / 'keep' / 'new.txt').exists()
        assert not (tmp_path / 'a').exists()

    def test_overwritten_file_is_restored(self, tmp_path):
        model = tmp_path / 'models' / 'forest.json'
        model.parent.mkdir()
        model.write_text('previous')
        with pytest.raises(RuntimeError):
            with OutputTracker() as tracker:
                tracker.file(model).write_text('partial')
                tracker.file(model)
                raise RuntimeError('boom')
        assert model.read_text() == 'previous'
        assert (tmp_path / 'models').is_dir()

    def test_success_keeps_outputs(self, tmp_path):
        with OutputTracker() as tracker:
            tracker.file(tmp_path / 'd' / 'f.txt').write_text('ok')
        assert (tmp_path / 'd' / 'f.txt').read_text() == 'ok'

    def test_unwritten_file_is_ignored(self, tmp_path):
        tracker = OutputTracker()
        tracker.file(tmp_path / 'never.txt')
        tracker.rollback()
        assert tracker.files == []


def test_quiet_mode_keeps_errors(capsys, monkeypatch):
    monkeypatch.setattr(Colors, 'quiet', True)
    print_info('hidden')
    print_error('shown')
    captured = capsys.readouterr()
    assert 'hidden' not in captured.out
    assert 'shown' in captured.err
