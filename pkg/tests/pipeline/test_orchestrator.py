from dataclasses import replace
from pathlib import Path

import numpy as np
import pandas as pd
import pytest

from stroke_classifier.dataset import Dataset, read_csv, write_csv
from stroke_classifier.errors import DatasetError, FeatureMismatchError
from stroke_classifier.learners import ForestModel, ForestParams, TreeModel, load_model
from stroke_classifier.pipeline import Orchestrator, PipelineConfig, align_to_model

from conftest import TINY_CLIPS, TINY_SPEC


@pytest.fixture
def small_forest_config() -> PipelineConfig:
    return replace(PipelineConfig(), forest=ForestParams(n_trees=8))


@pytest.fixture
def orchestrator(small_forest_config) -> Orchestrator:
    return Orchestrator(small_forest_config, verbose=False)


class TestSynthAndExtract:
    def test_corpus_layout(self, tiny_corpus):
        corpus = tiny_corpus['corpus']
        assert sorted(p.name for p in corpus.iterdir()) == ['high', 'low', 'mid']
        names = sorted(p.name for p in (corpus / 'low').iterdir())
        assert names == [f"low_{i:03d}.wav" for i in range(1, TINY_CLIPS + 1)]

    def test_feature_table(self, tiny_corpus):
        ds = read_csv(tiny_corpus['csv'])
        assert ds.n_rows == 3 * TINY_CLIPS
        assert ds.n_features == 58
        assert ds.class_names == ('high', 'low', 'mid')
        assert ds.class_counts().tolist() == [TINY_CLIPS] * 3

    def test_synth_is_reproducible(self, tmp_path, tiny_corpus):
        result = Orchestrator(verbose=False).synth(tmp_path / 'again', tiny_corpus['spec'], TINY_CLIPS)
        assert result.details['n_files'] == 3 * TINY_CLIPS
        for path in result.outputs:
            original = tiny_corpus['corpus'] / path.parent.name / path.name
            assert path.read_bytes() == original.read_bytes()

    def test_texture_windows_multiply_rows(self, tmp_path, tiny_corpus):
        config = replace(PipelineConfig(), analysis=replace(PipelineConfig().analysis, texture_frames=4))
        result = Orchestrator(config, verbose=False).extract(tiny_corpus['corpus'], tmp_path / 't.csv')
        assert result
        assert result.details['n_rows'] > 3 * TINY_CLIPS

    def test_extract_missing_directory(self, tmp_path, capsys):
        result = Orchestrator(verbose=False).extract(tmp_path / 'nothing', tmp_path / 'out.csv')
        assert not result
        assert 'does not exist' in result.error_message
        assert not (tmp_path / 'out.csv').exists()
        assert 'extract failed' in capsys.readouterr().err


class TestTrain:
    def test_cart_outputs(self, tmp_path, orchestrator, tiny_corpus):
        model_path = tmp_path / 'models' / 'cart.yaml'
        result = orchestrator.train(tiny_corpus['csv'], 'cart', model_path)
        assert result.success
        assert result.outputs == [model_path, tmp_path / 'models' / 'cart_summary.txt']
        assert isinstance(load_model(model_path), TreeModel)
        assert result.details['train_accuracy'] == 1.0
        assert result.details['test_accuracy'] >= 0.8

        summary = (tmp_path / 'models' / 'cart_summary.txt').read_text(encoding='utf-8')
        assert summary.startswith('# Training summary')
        assert '- **train rows**: 18' in summary
        assert '- **test rows**: 6' in summary

    def test_forest_writes_importance(self, tmp_path, orchestrator, separable_csv):
        result = orchestrator.train(separable_csv, 'forest', tmp_path / 'rf.yaml')
        assert result
        assert result.details['n_trees'] == 8
        importance = pd.read_csv(tmp_path / 'rf_importance.csv')
        assert importance.feature.tolist() == ['f0', 'f1']
        assert importance.importance.sum() == pytest.approx(1.0, abs=1e-5)
        assert 'Top features' in (tmp_path / 'rf_summary.txt').read_text(encoding='utf-8')

    def test_separate_test_table(self, tmp_path, orchestrator, separable_csv):
        result = orchestrator.train(separable_csv, 'id3', tmp_path / 'id3.yaml', test_csv=separable_csv)
        assert result
        assert result.details['test_accuracy'] == result.details['train_accuracy']

    def test_unknown_algorithm(self, tmp_path, orchestrator, separable_csv):
        result = orchestrator.train(separable_csv, 'svm', tmp_path / 'svm.yaml')
        assert not result
        assert list(tmp_path.glob('svm*')) == []


class TestEvaluate:
    def test_report_files(self, tmp_path, orchestrator, separable_csv):
        orchestrator.train(separable_csv, 'cart', tmp_path / 'cart.yaml')
        result = orchestrator.evaluate(tmp_path / 'cart.yaml', separable_csv, tmp_path / 'report')
        assert result
        assert result.details['n_test'] == 30
        assert sorted(p.name for p in (tmp_path / 'report').iterdir()) == [
            'confusion.csv', 'report.csv', 'report.txt',
            'roc_class_0.csv', 'roc_class_1.csv', 'roc_class_2.csv',
        ]
        text = (tmp_path / 'report' / 'report.txt').read_text(encoding='utf-8')
        assert '- **model**: cart.yaml' in text
        assert '## Overlapping pair: ti / ta' in text

    def test_feature_mismatch(self, tmp_path, orchestrator, separable_csv):
        orchestrator.train(separable_csv, 'cart', tmp_path / 'cart.yaml')
        ds = read_csv(separable_csv)
        renamed = write_csv(Dataset(ds.X, ds.y, ds.class_names, ('f0', 'other')), tmp_path / 'r.csv')
        result = orchestrator.evaluate(tmp_path / 'cart.yaml', renamed, tmp_path / 'report')
        assert not result
        assert not (tmp_path / 'report').exists()


class TestExportDot:
    def test_tree(self, tmp_path, orchestrator, separable_csv):
        orchestrator.train(separable_csv, 'cart', tmp_path / 'cart.yaml')
        result = orchestrator.export_dot(tmp_path / 'cart.yaml', tmp_path / 'tree.dot')
        assert result
        assert result.details['n_edges'] == result.details['n_nodes'] - 1
        assert (tmp_path / 'tree.dot').read_text(encoding='utf-8').lstrip().startswith('digraph')
        assert not orchestrator.export_dot(tmp_path / 'cart.yaml', tmp_path / 'x.dot', tree_index=1)

    def test_forest_needs_tree_index(self, tmp_path, orchestrator, separable_csv):
        orchestrator.train(separable_csv, 'forest', tmp_path / 'rf.yaml')
        assert not orchestrator.export_dot(tmp_path / 'rf.yaml', tmp_path / 'a.dot')
        assert not orchestrator.export_dot(tmp_path / 'rf.yaml', tmp_path / 'b.dot', tree_index=8)
        assert orchestrator.export_dot(tmp_path / 'rf.yaml', tmp_path / 'c.dot', tree_index=7)
        assert not (tmp_path / 'a.dot').exists()


class TestCompare:
    def test_models_side_by_side(self, tmp_path, orchestrator, separable_csv):
        (tmp_path / 'x').mkdir()
        orchestrator.train(separable_csv, 'cart', tmp_path / 'model.yaml')
        orchestrator.train(separable_csv, 'id3', tmp_path / 'x' / 'model.yaml')
        result = orchestrator.compare(
            [tmp_path / 'model.yaml', tmp_path / 'x' / 'model.yaml'], separable_csv, tmp_path / 'cmp'
        )
        assert result
        assert sorted(result.details['accuracy']) == ['model', 'model_2']
        frame = pd.read_csv(tmp_path / 'cmp' / 'comparison.csv')
        assert frame.classifier.tolist() == ['model', 'model_2']


class TestOverlap:
    def test_selected_pair(self, tmp_path, orchestrator, tiny_corpus):
        result = orchestrator.overlap(tiny_corpus['csv'], tmp_path / 'ov', pairs=[('low', 'high')])
        assert result
        assert sorted(p.name for p in (tmp_path / 'ov').iterdir()) == [
            'overlap.csv', 'overlap.txt', 'points_low_high.csv',
        ]
        frame = pd.read_csv(tmp_path / 'ov' / 'points_low_high.csv')
        assert sorted(frame.label.unique()) == ['high', 'low']
        assert len(frame) == 2 * TINY_CLIPS

    def test_default_pairs_absent(self, tmp_path, orchestrator, tiny_corpus):
        result = orchestrator.overlap(tiny_corpus['csv'], tmp_path / 'ov')
        assert not result
        assert not (tmp_path / 'ov').exists()

    def test_missing_feature_columns_roll_back(self, tmp_path, orchestrator, separable_csv):
        result = orchestrator.overlap(separable_csv, tmp_path / 'ov')
        assert not result
        assert not (tmp_path / 'ov').exists()


class TestExperiment:
    def test_layout(self, tmp_path, orchestrator, separable_csv):
        out = tmp_path / 'exp'
        result = orchestrator.experiment([separable_csv], out)
        assert result
        run = out / 'toy'
        for algorithm in ('cart', 'id3', 'forest'):
            assert (run / f"{algorithm}.yaml").is_file()
            assert (run / algorithm / 'report.txt').is_file()
        assert (run / 'comparison.txt').is_file()
        frame = pd.read_csv(out / 'comparison.csv')
        assert frame.classifier.tolist() == ['toy:cart', 'toy:id3', 'toy:forest']
        assert isinstance(load_model(run / 'forest.yaml'), ForestModel)

    def test_failure_rolls_back_everything(self, tmp_path, orchestrator, separable_csv):
        bad = tmp_path / 'bad.csv'
        bad.write_text("f0,f1,label\n1,2,ka\n3,4,ka\n5,6,ti\n", encoding='utf-8')
        out = tmp_path / 'exp'
        result = orchestrator.experiment([separable_csv, bad], out, algorithms=['cart'])
        assert not result
        assert 'ti' in result.error_message
        assert not out.exists()


class TestDeterminism:
    def _pipeline(self, orchestrator: Orchestrator, root: Path) -> Path:
        root.mkdir()
        spec_file = root / 'tiny.spec'
        spec_file.write_text(TINY_SPEC, encoding='utf-8')
        assert orchestrator.synth(root / 'corpus', spec_file, TINY_CLIPS)
        assert orchestrator.extract(root / 'corpus', root / 'features.csv')
        assert orchestrator.train(root / 'features.csv', 'forest', root / 'forest.yaml')
        assert orchestrator.evaluate(root / 'forest.yaml', root / 'features.csv', root / 'report')
        return root

    def test_full_pipeline_is_byte_identical(self, tmp_path, small_forest_config):
        first = self._pipeline(Orchestrator(small_forest_config, verbose=False), tmp_path / 'a')
        second = self._pipeline(Orchestrator(small_forest_config, verbose=False), tmp_path / 'b')

        outputs = sorted(
            p.relative_to(first) for p in first.rglob('*')
            if p.is_file() and p.suffix != '.wav' and p.name != 'tiny.spec'
        )
        assert {str(p) for p in outputs} >= {
            'features.csv', 'forest.yaml', 'forest_summary.txt', 'forest_importance.csv',
            'report/report.txt', 'report/report.csv', 'report/confusion.csv',
            'report/roc_class_0.csv',
        }
        for rel in outputs:
            assert (first / rel).read_bytes() == (second / rel).read_bytes(), rel

    def test_retrained_forest_file_is_identical(self, tmp_path, orchestrator, separable_csv):
        assert orchestrator.train(separable_csv, 'forest', tmp_path / 'one.yaml')
        assert orchestrator.train(separable_csv, 'forest', tmp_path / 'two.yaml')
        assert (tmp_path / 'one.yaml').read_bytes() == (tmp_path / 'two.yaml').read_bytes()


class TestAlignToModel:
    def test_reindexes_classes(self):
        ds = Dataset(np.zeros((2, 1)), [0, 1], ('ta', 'ka'), ('f0',))
        aligned = align_to_model(ds, ('f0',), ('ka', 'ti', 'ta'))
        assert aligned.class_names == ('ka', 'ti', 'ta')
        assert aligned.labels == ['ta', 'ka']

    def test_feature_order_matters(self):
        ds = Dataset(np.zeros((1, 2)), [0], ('ka',), ('f1', 'f0'))
        with pytest.raises(FeatureMismatchError):
            align_to_model(ds, ('f0', 'f1'), ('ka',))

    def test_unknown_class(self):
        ds = Dataset(np.zeros((1, 1)), [0], ('ghe',), ('f0',))
        with pytest.raises(DatasetError):
            align_to_model(ds, ('f0',), ('ka',))
