"""
Report Generator - 评估报告生成

输出文件 (均不含时间戳，相同输入逐字节相同):
- report.txt       人类可读报告 (Markdown 表格)
- report.csv       metric,class,value 长表
- confusion.csv    混淆矩阵 (行为真实类别)
- roc_class_<k>.csv 每类 ROC 点 (fpr,tpr)
- importance.csv   特征重要性 (随机森林)
"""

from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from .metrics import EvalReport, RocCurve

NamedReport = Tuple[str, EvalReport]

# 文献中多层感知机在 ti / ta 上的准确率，对比表中作为参考行
PUBLISHED_PAIR_BASELINES: Dict[Tuple[str, str], Tuple[str, str]] = {
    ('ti', 'ta'): ('MLP (published)', '0.8-0.82'),
}


def fmt(value: float) -> str:
    """数值格式: 保留 6 位小数后取最短表示 (0.97 -> '0.97', 1 -> '1.0')"""
    return repr(round(float(value), 6))


def markdown_table(headers: Sequence[str], rows: Sequence[Sequence[str]]) -> List[str]:
    """按列宽对齐的 Markdown 表格"""
    widths = [len(h) for h in headers]
    for row in rows:
        widths = [max(w, len(cell)) for w, cell in zip(widths, row)]

    def _line(cells: Sequence[str]) -> str:
        return "| " + " | ".join(c.ljust(w) for c, w in zip(cells, widths)) + " |"

    lines = [_line(headers), "|" + "|".join("-" * (w + 2) for w in widths) + "|"]
    lines.extend(_line(row) for row in rows)
    return lines


def _write_frame(frame: pd.DataFrame, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, encoding='utf-8', lineterminator='\n')
    return path


class ReportGenerator:
    """报告生成器"""

    @staticmethod
    def overlapping_pair_lines(
        reports: Sequence[NamedReport],
        pair: Tuple[str, str],
        with_baseline: bool = False
    ) -> List[str]:
        """
        重叠类别对的召回率 (并排显示)

        报告中缺少任一类别时返回空列表。with_baseline 时追加已发表的参考结果 (如有)。
        """
        a, b = pair
        present = [(name, r) for name, r in reports if a in r.class_names and b in r.class_names]
        if not present:
            return []
        rows = [
            [name, fmt(r.recall_of(a)), fmt(r.recall_of(b))]
            for name, r in present
        ]
        baseline = PUBLISHED_PAIR_BASELINES.get(pair) or PUBLISHED_PAIR_BASELINES.get((b, a))
        if with_baseline and baseline is not None:
            name, value = baseline
            rows.append([name, value, value])
        return [f"## Overlapping pair: {a} / {b}", ""] + markdown_table(
            ["classifier", f"recall[{a}]", f"recall[{b}]"], rows
        )

    @staticmethod
    def report_text(
        report: EvalReport,
        rocs: Sequence[RocCurve],
        title: str = "Evaluation report",
        extra_info: Optional[Dict[str, str]] = None,
        pair: Optional[Tuple[str, str]] = None,
        skipped: Sequence[Tuple[int, str]] = ()
    ) -> str:
        """
        生成 report.txt 的内容

        Args:
            report: 评估结果
            rocs: 各类 ROC 曲线
            title: 标题
            extra_info: 额外信息 (模型、数据路径等)
            pair: 需要单独列出的重叠类别对
            skipped: 未计算 ROC 的 (类别下标, 原因)
        """
        auc = {roc.class_index: fmt(roc.auc) for roc in rocs}
        lines = [f"# {title}", ""]
        for key, value in (extra_info or {}).items():
            lines.append(f"- **{key}**: {value}")
        lines.append(f"- **n_test**: {report.n_test}")
        lines.append(f"- **accuracy**: {fmt(report.accuracy)}")

        lines += ["", "## Per-class", ""]
        rows = [
            [
                name,
                str(int(report.support[k])),
                fmt(report.precision[k]),
                fmt(report.recall[k]),
                auc.get(k, "-"),
            ]
            for k, name in enumerate(report.class_names)
        ]
        lines += markdown_table(["class", "support", "precision", "recall", "auc"], rows)

        lines += ["", "## Confusion matrix (rows = truth, columns = predicted)", ""]
        rows = [
            [name] + [str(int(v)) for v in report.confusion[k]]
            for k, name in enumerate(report.class_names)
        ]
        lines += markdown_table(["truth"] + list(report.class_names), rows)

        if pair is not None:
            section = ReportGenerator.overlapping_pair_lines([("model", report)], pair)
            if section:
                lines += [""] + section

        if skipped:
            lines += ["", "## ROC skipped", ""]
            for k, reason in skipped:
                lines.append(f"- {report.class_names[k]}: {reason}")

        return "\n".join(lines) + "\n"

    @staticmethod
    def report_frame(report: EvalReport, rocs: Sequence[RocCurve]) -> pd.DataFrame:
        """report.csv 的内容: metric,class,value"""
        records = [('accuracy', '', fmt(report.accuracy)), ('n_test', '', str(report.n_test))]
        auc = {roc.class_index: roc.auc for roc in rocs}
        for k, name in enumerate(report.class_names):
            records.append(('support', name, str(int(report.support[k]))))
            records.append(('precision', name, fmt(report.precision[k])))
            records.append(('recall', name, fmt(report.recall[k])))
            if k in auc:
                records.append(('auc', name, fmt(auc[k])))
        return pd.DataFrame(records, columns=['metric', 'class', 'value'])

    @staticmethod
    def confusion_frame(report: EvalReport) -> pd.DataFrame:
        frame = pd.DataFrame(report.confusion, columns=list(report.class_names))
        frame.insert(0, 'truth', list(report.class_names))
        return frame

    @staticmethod
    def write_roc(roc: RocCurve, output_dir: Path) -> Path:
        """写出 roc_class_<k>.csv"""
        frame = pd.DataFrame(
            {'fpr': [fmt(v) for v in roc.fpr], 'tpr': [fmt(v) for v in roc.tpr]}
        )
        return _write_frame(frame, output_dir / f"roc_class_{roc.class_index}.csv")

    @staticmethod
    def write_evaluation(
        report: EvalReport,
        rocs: Sequence[RocCurve],
        output_dir: Path,
        **text_options
    ) -> List[Path]:
        """
        写出评估报告全部文件

        Args:
            report: 评估结果
            rocs: 各类 ROC 曲线
            output_dir: 输出目录
            text_options: 传给 report_text 的参数

        Returns:
            写出的文件列表
        """
        output_dir.mkdir(parents=True, exist_ok=True)
        text_path = output_dir / "report.txt"
        text_path.write_text(
            ReportGenerator.report_text(report, rocs, **text_options), encoding='utf-8'
        )
        paths = [
            text_path,
            _write_frame(ReportGenerator.report_frame(report, rocs), output_dir / "report.csv"),
            _write_frame(ReportGenerator.confusion_frame(report), output_dir / "confusion.csv"),
        ]
        paths.extend(ReportGenerator.write_roc(roc, output_dir) for roc in rocs)
        return paths

    @staticmethod
    def write_importance(
        feature_names: Sequence[str],
        importance: np.ndarray,
        output_path: Path
    ) -> Path:
        """写出 importance.csv (按特征顺序)"""
        frame = pd.DataFrame({
            'feature': list(feature_names),
            'importance': [fmt(v) for v in importance],
        })
        return _write_frame(frame, output_path)


# ---------------------------------------------------------------- comparison

def compare_frame(reports: Sequence[NamedReport]) -> pd.DataFrame:
    """对比表: 每个分类器一行，列为 accuracy 和各类召回率 (按给定顺序)"""
    class_names: List[str] = []
    for _, report in reports:
        class_names.extend(c for c in report.class_names if c not in class_names)

    records = []
    for name, report in reports:
        record = {'classifier': name, 'accuracy': fmt(report.accuracy)}
        for c in class_names:
            record[f"recall[{c}]"] = fmt(report.recall_of(c)) if c in report.class_names else '-'
        records.append(record)
    return pd.DataFrame(records)


def compare_report(
    reports: Sequence[NamedReport],
    pair: Optional[Tuple[str, str]] = None,
    title: str = "Classifier comparison"
) -> str:
    """
    多个分类器的对比表 (文本)

    Args:
        reports: (名称, 评估结果)，按给定顺序输出
        pair: 可选重叠类别对，额外并排列出其召回率
        title: 标题
    """
    frame = compare_frame(reports)
    rows = [[str(v) for v in row] for row in frame.itertuples(index=False)]
    lines = [f"# {title}", ""] + markdown_table(list(frame.columns), rows)
    if pair is not None:
        section = ReportGenerator.overlapping_pair_lines(reports, pair, with_baseline=True)
        if section:
            lines += [""] + section
    return "\n".join(lines) + "\n"


def write_comparison(
    reports: Sequence[NamedReport],
    output_dir: Path,
    pair: Optional[Tuple[str, str]] = None,
    stem: str = "comparison"
) -> List[Path]:
    """写出 <stem>.txt 和 <stem>.csv"""
    output_dir.mkdir(parents=True, exist_ok=True)
    text_path = output_dir / f"{stem}.txt"
    text_path.write_text(compare_report(reports, pair), encoding='utf-8')
    return [text_path, _write_frame(compare_frame(reports), output_dir / f"{stem}.csv")]
