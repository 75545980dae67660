import numpy as np
import pandas as pd
import pytest

from stroke_classifier.evaluation import (
    ReportGenerator,
    compare_frame,
    compare_report,
    evaluate,
    fmt,
    markdown_table,
    roc_curves,
    write_comparison,
)

CLASSES = ['ti', 'ta', 'na']
PAIRS = [(0, 0), (0, 1), (1, 1), (1, 1), (2, 2), (2, 0)]


@pytest.fixture
def report():
    return evaluate(PAIRS, 3, CLASSES)


@pytest.fixture
def rocs():
    scores = np.array([
        [0.8, 0.1, 0.1],
        [0.3, 0.6, 0.1],
        [0.1, 0.9, 0.0],
        [0.2, 0.7, 0.1],
        [0.1, 0.1, 0.8],
        [0.5, 0.0, 0.5],
    ])
    curves, skipped = roc_curves(scores, [t for t, _ in PAIRS])
    assert not skipped
    return curves


@pytest.mark.parametrize('value, text', [
    (0.97, '0.97'),
    (1, '1.0'),
    (2 / 3, '0.666667'),
    (0.0, '0.0'),
    (np.float64(0.1234564), '0.123456'),
])
def test_fmt(value, text):
    assert fmt(value) == text


def test_markdown_table_alignment():
    lines = markdown_table(['a', 'long'], [['xyz', '1']])
    assert lines == ['| a   | long |', '|-----|------|', '| xyz | 1    |']


class TestReportText:
    def test_sections(self, report, rocs):
        text = ReportGenerator.report_text(report, rocs, extra_info={'model': 'cart.yaml'})
        assert text.startswith('# Evaluation report\n')
        assert '- **model**: cart.yaml' in text
        assert '- **accuracy**: 0.666667' in text
        assert '## Per-class' in text
        assert '## Confusion matrix (rows = truth, columns = predicted)' in text
        assert '## Overlapping pair' not in text
        assert '## ROC skipped' not in text

    def test_overlapping_pair_section(self, report, rocs):
        text = ReportGenerator.report_text(report, rocs, pair=('ti', 'ta'))
        assert '## Overlapping pair: ti / ta' in text
        assert '| model      | 0.5        | 1.0        |' in text

    def test_pair_missing_from_classes(self, report, rocs):
        text = ReportGenerator.report_text(report, rocs, pair=('ge', 'ke'))
        assert 'Overlapping pair' not in text

    def test_skipped_classes_listed(self, report, rocs):
        text = ReportGenerator.report_text(report, rocs[:2], skipped=[(2, 'no positive instances')])
        assert '## ROC skipped' in text
        assert '- na: no positive instances' in text
        na_row = next(line for line in text.splitlines() if line.startswith('| na '))
        assert na_row.rstrip(' |').endswith('-')


class TestWriteEvaluation:
    def test_files_and_headers(self, tmp_path, report, rocs):
        paths = ReportGenerator.write_evaluation(report, rocs, tmp_path / 'out', title='cart')
        names = sorted(p.name for p in paths)
        assert names == sorted([
            'report.txt', 'report.csv', 'confusion.csv',
            'roc_class_0.csv', 'roc_class_1.csv', 'roc_class_2.csv',
        ])

        long = pd.read_csv(tmp_path / 'out' / 'report.csv', dtype=str, keep_default_na=False)
        assert list(long.columns) == ['metric', 'class', 'value']
        assert long.iloc[0].tolist() == ['accuracy', '', '0.666667']
        recall = long[(long.metric == 'recall') & (long['class'] == 'ta')]
        assert recall.value.tolist() == ['1.0']

        confusion = pd.read_csv(tmp_path / 'out' / 'confusion.csv')
        assert list(confusion.columns) == ['truth'] + CLASSES
        assert confusion[CLASSES].to_numpy().tolist() == report.confusion.tolist()

        roc = pd.read_csv(tmp_path / 'out' / 'roc_class_0.csv')
        assert list(roc.columns) == ['fpr', 'tpr']
        assert roc.iloc[0].tolist() == [0.0, 0.0]
        assert roc.iloc[-1].tolist() == [1.0, 1.0]

    def test_byte_identical_reruns(self, tmp_path, report, rocs):
        a = ReportGenerator.write_evaluation(report, rocs, tmp_path / 'a')
        b = ReportGenerator.write_evaluation(report, rocs, tmp_path / 'b')
        for pa, pb in zip(a, b):
            assert pa.read_bytes() == pb.read_bytes()

    def test_importance(self, tmp_path):
        path = ReportGenerator.write_importance(('f0', 'f1'), np.array([0.75, 0.25]),
                                                tmp_path / 'importance.csv')
        assert path.read_text(encoding='utf-8') == 'feature,importance\nf0,0.75\nf1,0.25\n'


class TestComparison:
    def test_one_row_per_classifier_in_order(self, report):
        other = evaluate([(0, 0), (0, 0), (1, 1), (1, 0), (2, 2), (2, 2)], 3, CLASSES)
        frame = compare_frame([('forest', other), ('cart', report)])
        assert frame.classifier.tolist() == ['forest', 'cart']
        assert list(frame.columns) == ['classifier', 'accuracy', 'recall[ti]', 'recall[ta]', 'recall[na]']
        assert frame.iloc[1].tolist() == ['cart', '0.666667', '0.5', '1.0', '0.5']

    def test_report_with_pair(self, report):
        text = compare_report([('cart', report), ('id3', report)], pair=('ti', 'ta'))
        assert text.startswith('# Classifier comparison\n')
        assert '## Overlapping pair: ti / ta' in text
        assert text.count('| cart ') == 2

    def test_published_baseline_row(self, report):
        text = compare_report([('forest', report)], pair=('ti', 'ta'))
        section = text.split('## Overlapping pair: ti / ta', 1)[1]
        assert '| MLP (published) | 0.8-0.82   | 0.8-0.82   |' in section

    def test_no_baseline_for_other_pairs(self, report):
        text = compare_report([('forest', report)], pair=('ti', 'na'))
        assert '## Overlapping pair: ti / na' in text
        assert 'MLP' not in text

    def test_single_model_report_has_no_baseline(self, report, rocs):
        assert 'MLP' not in ReportGenerator.report_text(report, rocs, pair=('ti', 'ta'))

    def test_classes_missing_from_one_report(self, report):
        partial = evaluate([(0, 0), (1, 1)], 2, ['ti', 'ge'])
        frame = compare_frame([('cart', report), ('other', partial)])
        assert frame.iloc[1]['recall[ta]'] == '-'
        assert frame.iloc[0]['recall[ge]'] == '-'

    def test_write_comparison(self, tmp_path, report):
        paths = write_comparison([('cart', report)], tmp_path, stem='summary')
        assert [p.name for p in paths] == ['summary.txt', 'summary.csv']
        assert paths[1].read_text(encoding='utf-8').splitlines()[0] == 'classifier,accuracy,recall[ti],recall[ta],recall[na]'
