import pytest

from stroke_classifier.errors import ConfigError
from stroke_classifier.pipeline import (
    CONFIG_FILENAME,
    AudioConfig,
    PipelineConfig,
    config_from_dict,
    load_config,
)


def test_defaults():
    config = PipelineConfig()
    assert config.analysis.frame_len == 512
    assert config.analysis.hop == 256
    assert config.tree.criterion == 'gini'
    assert config.forest.n_trees == 100
    assert config.split.train_fraction == 0.7
    assert config.split.split_seed == 42
    assert config.audio.sample_rate_hz == 44100
    assert config.synth.clips_per_class == 50
    assert config.seed == 7


def test_forest_params_carry_global_seed():
    config = config_from_dict({'seed': 99})
    assert config.forest_params().seed == 99


def test_sections_from_dict():
    config = config_from_dict({
        'analysis': {'texture_frames': 4, 'n_mfcc': 10},
        'tree': {'criterion': 'entropy', 'max_depth': 6},
        'forest': {'n_trees': 30, 'criterion': 'entropy', 'compute_oob': True},
        'split': {'train_fraction': 0.8},
        'audio': {'short_strokes': ['ka'], 'normalize': False},
        'synth': {'clips_per_class': 5, 'detune_cents': 0.0},
        'overlapping_pair': ['ge', 'ke'],
    })
    assert config.analysis.texture_frames == 4
    assert config.analysis.n_mfcc == 10
    assert config.tree.max_depth == 6
    assert config.forest.n_trees == 30
    assert config.forest.compute_oob is True
    assert config.forest.tree_params.criterion == 'entropy'
    assert config.split.train_fraction == 0.8
    assert config.audio.short_strokes == ('ka',)
    assert config.audio.normalize is False
    assert config.synth.clips_per_class == 5
    assert config.synth.variation.detune_cents == 0.0
    assert config.overlapping_pair == ('ge', 'ke')


def test_empty_sections_use_defaults():
    assert config_from_dict({'tree': None, 'split': None}) == PipelineConfig()


@pytest.mark.parametrize('data', [
    {'colour': 'red'},
    {'tree': {'depth': 3}},
    {'forest': {'seed': 3}},
    {'forest': {'tree_params': {}}},
    {'synth': {'loudness': 1.0}},
    {'split': [0.7]},
    {'overlapping_pair': ['ti']},
    {'seed': 'lucky'},
])
def test_rejects_bad_config(data):
    with pytest.raises(ConfigError):
        config_from_dict(data)


def test_short_stroke_durations():
    audio = AudioConfig()
    assert audio.duration_for('ti') == 0.3
    assert audio.duration_for('tra') == 0.3
    assert audio.duration_for('dha') == 0.5


class TestLoadConfig:
    def test_no_file_gives_defaults(self, tmp_path):
        assert load_config(search_dir=tmp_path) == PipelineConfig()

    def test_default_file_in_search_dir(self, tmp_path):
        (tmp_path / CONFIG_FILENAME).write_text("seed: 3\ntree:\n  min_leaf: 2\n", encoding='utf-8')
        config = load_config(search_dir=tmp_path)
        assert config.seed == 3
        assert config.tree.min_leaf == 2

    def test_explicit_file_wins(self, tmp_path):
        (tmp_path / CONFIG_FILENAME).write_text("seed: 3\n", encoding='utf-8')
        explicit = tmp_path / 'other.yaml'
        explicit.write_text("seed: 11\n", encoding='utf-8')
        assert load_config(explicit, search_dir=tmp_path).seed == 11

    def test_missing_explicit_file(self, tmp_path):
        with pytest.raises(ConfigError):
            load_config(tmp_path / 'absent.yaml')

    def test_invalid_yaml_names_file(self, tmp_path):
        path = tmp_path / 'broken.yaml'
        path.write_text("tree: [unclosed\n", encoding='utf-8')
        with pytest.raises(ConfigError, match='broken.yaml'):
            load_config(path)

    def test_unknown_key_names_file(self, tmp_path):
        path = tmp_path / 'typo.yaml'
        path.write_text("tre:\n  max_depth: 2\n", encoding='utf-8')
        with pytest.raises(ConfigError, match="typo.yaml: Unknown key 'tre'"):
            load_config(path)
