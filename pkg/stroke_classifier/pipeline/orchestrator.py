"""
Orchestrator - 编排器

每个命令行子命令对应一个阶段 (synth / extract / train / evaluate /
export-dot / compare / experiment / overlap)。阶段失败时删除本阶段写出的全部文件，
并返回 success=False 的 StageResult。
"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..audio import (
    DEFAULT_PRESET,
    clip_to_duration,
    generate_corpus,
    load_stroke_specs,
    load_wav,
    peak_normalize,
    write_wav,
)
from ..dataset import Dataset, read_csv, train_test_split, write_csv
from ..errors import DatasetError, FeatureMismatchError, StrokeClassifierError
from ..evaluation import (
    CONTRAST_PAIRS,
    EvalReport,
    ReportGenerator,
    RocCurve,
    evaluate,
    fmt,
    roc_curves,
    write_comparison,
    write_overlap,
)
from ..features import FeatureExtractor
from ..learners import (
    ALGORITHMS,
    ForestModel,
    TreeModel,
    count_nodes_and_edges,
    feature_importance,
    get_learner,
    load_model,
    save_model,
    write_dot,
)
from ..utils import (
    OutputTracker,
    collect_labeled_wavs,
    print_error,
    print_header,
    print_info,
    print_step,
    print_success,
    print_warning,
)
from .config import PipelineConfig

Model = Any  # TreeModel | ForestModel

MODEL_SUFFIX = '.yaml'


@dataclass
class StageResult:
    """阶段执行结果"""
    stage: str
    success: bool = True
    outputs: List[Path] = field(default_factory=list)
    error_message: str = ""
    details: Dict[str, Any] = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.success


@dataclass
class Evaluation:
    """一个模型在一个数据集上的评估"""
    report: EvalReport
    rocs: List[RocCurve]
    skipped: List[Tuple[int, str]]


def align_to_model(ds: Dataset, feature_names: Sequence[str], class_names: Sequence[str]) -> Dataset:
    """
    把数据集的类别编码对齐到模型

    Raises:
        FeatureMismatchError: 特征名 (含顺序) 不一致
        DatasetError: 数据中出现模型不认识的类别
    """
    if tuple(ds.feature_names) != tuple(feature_names):
        missing = [f for f in feature_names if f not in ds.feature_names]
        extra = [f for f in ds.feature_names if f not in feature_names]
        raise FeatureMismatchError(
            f"Feature columns do not match the model "
            f"(missing: {missing[:5]}, unexpected: {extra[:5]})"
        )
    unknown = sorted(set(ds.class_names) - set(class_names))
    if unknown:
        raise DatasetError(f"Classes unknown to the model: {unknown}")
    index = {name: i for i, name in enumerate(class_names)}
    y = np.array([index[label] for label in ds.labels], dtype=np.int64)
    return Dataset(ds.X, y, tuple(class_names), ds.feature_names)


def evaluate_model(model: Model, ds: Dataset) -> Evaluation:
    """在已对齐的数据集上评估模型；ROC 分数为叶子分布或投票比例"""
    scores = model.predict_proba(ds.X)
    predicted = np.argmax(scores, axis=1)
    report = evaluate(zip(ds.y, predicted), len(model.class_names), model.class_names)
    rocs, skipped = roc_curves(scores, ds.y)
    return Evaluation(report, rocs, skipped)


class Orchestrator:
    """
    编排器 - 协调各阶段

    负责:
    - 调用库函数完成各阶段
    - 控制台进度输出
    - 失败时回滚输出文件
    """

    def __init__(self, config: Optional[PipelineConfig] = None, verbose: bool = True):
        """
        Args:
            config: 流水线配置，默认 PipelineConfig()
            verbose: 是否输出进度
        """
        self.config = config or PipelineConfig()
        self.verbose = verbose

    # ------------------------------------------------------------ helpers

    def _say(self, printer: Callable[..., None], *args: Any) -> None:
        if self.verbose:
            printer(*args)

    def _run_stage(
        self,
        stage: str,
        body: Callable[[OutputTracker], Dict[str, Any]]
    ) -> StageResult:
        tracker = OutputTracker()
        try:
            details = body(tracker)
        except (StrokeClassifierError, OSError) as e:
            tracker.rollback()
            print_error(f"{stage} failed: {e}")
            return StageResult(stage=stage, success=False, error_message=str(e))
        except BaseException:
            tracker.rollback()
            raise
        return StageResult(stage=stage, success=True, outputs=list(tracker.files), details=details)

    def _write_evaluation(
        self,
        tracker: OutputTracker,
        evaluation: Evaluation,
        report_dir: Path,
        extra_info: Dict[str, str]
    ) -> List[Path]:
        tracker.directory(report_dir)
        for name in ('report.txt', 'report.csv', 'confusion.csv'):
            tracker.file(report_dir / name)
        for roc in evaluation.rocs:
            tracker.file(report_dir / f"roc_class_{roc.class_index}.csv")
        for k, reason in evaluation.skipped:
            self._say(
                print_warning,
                f"  ROC skipped for class '{evaluation.report.class_names[k]}': {reason}"
            )
        return ReportGenerator.write_evaluation(
            evaluation.report,
            evaluation.rocs,
            report_dir,
            extra_info=extra_info,
            pair=self.config.overlapping_pair,
            skipped=evaluation.skipped,
        )

    # ------------------------------------------------------------ synth

    def synth(
        self,
        out_dir: Path,
        spec_file: Optional[Path] = None,
        clips_per_class: Optional[int] = None
    ) -> StageResult:
        """
        生成合成语料: out_dir/<label>/<label>_<nnn>.wav

        Args:
            out_dir: 输出目录
            spec_file: 语料描述文件，默认内置 13 类预设
            clips_per_class: 每类片段数，默认取配置
        """
        cfg = self.config
        out_dir = Path(out_dir)
        n = clips_per_class if clips_per_class is not None else cfg.synth.clips_per_class

        def body(tracker: OutputTracker) -> Dict[str, Any]:
            specs = load_stroke_specs(spec_file) if spec_file else list(DEFAULT_PRESET)
            self._say(print_header, "Synthesizing stroke corpus")
            self._say(
                print_info,
                f"{len(specs)} classes x {n} clips, seed {cfg.seed}, "
                f"{cfg.audio.sample_rate_hz} Hz\n"
            )
            tracker.directory(out_dir)
            count = 0
            clips = generate_corpus(
                specs, n, cfg.audio.sample_rate_hz, cfg.seed, cfg.synth.variation
            )
            for i, clip in clips:
                if i == 0:
                    self._say(print_step, count // n + 1, len(specs), clip.label)
                path = tracker.file(out_dir / clip.label / f"{clip.label}_{i + 1:03d}.wav")
                write_wav(clip, path)
                count += 1
            self._say(print_success, f"Wrote {count} clips to {out_dir}")
            return {'n_files': count, 'n_classes': len(specs)}

        return self._run_stage('synth', body)

    # ------------------------------------------------------------ extract

    def extract(self, in_dir: Path, out_csv: Path) -> StageResult:
        """
        提取特征表: 每个子目录一个类别，标签为目录名

        每个文件截取到该类别的时长 (短击打 0.3 s，其余 0.5 s)，峰值归一化后提取。
        """
        cfg = self.config

        def body(tracker: OutputTracker) -> Dict[str, Any]:
            if not Path(in_dir).is_dir():
                raise DatasetError(f"Input directory does not exist: {in_dir}")
            labeled = collect_labeled_wavs(Path(in_dir))
            if not labeled:
                raise DatasetError(f"No labeled WAV files under {in_dir}")

            self._say(print_header, "Extracting features")
            extractor = FeatureExtractor(cfg.analysis)
            vectors = []
            for step, (label, files) in enumerate(labeled.items(), 1):
                self._say(print_step, step, len(labeled), f"{label} ({len(files)} files)")
                for path in files:
                    clip = load_wav(path, cfg.audio.sample_rate_hz, label=label)
                    clip = clip_to_duration(clip, cfg.audio.duration_for(label))
                    if cfg.audio.normalize:
                        clip = peak_normalize(clip)
                    vectors.extend(extractor.extract(clip))

            ds = Dataset.from_vectors(vectors, class_names=list(labeled))
            write_csv(ds, tracker.file(Path(out_csv)))
            self._say(
                print_success,
                f"Wrote {ds.n_rows} rows x {ds.n_features} features to {out_csv}"
            )
            return {'n_rows': ds.n_rows, 'n_features': ds.n_features, 'n_classes': ds.n_classes}

        return self._run_stage('extract', body)

    # ------------------------------------------------------------ train

    def _split(self, csv: Path, test_csv: Optional[Path]) -> Tuple[Dataset, Dataset]:
        ds = read_csv(csv)
        if test_csv is None:
            return train_test_split(
                ds, self.config.split.train_fraction, self.config.split.split_seed
            )
        test = align_to_model(read_csv(test_csv), ds.feature_names, ds.class_names)
        return ds, test

    def train(
        self,
        csv: Path,
        algorithm: str,
        model_out: Path,
        test_csv: Optional[Path] = None
    ) -> StageResult:
        """
        训练模型

        未给出 test_csv 时按配置在 csv 上做分层划分。
        写出模型文件、<stem>_summary.txt，随机森林另写 <stem>_importance.csv。
        """
        cfg = self.config
        model_out = Path(model_out)

        def body(tracker: OutputTracker) -> Dict[str, Any]:
            learner = get_learner(algorithm, cfg.tree, cfg.forest_params())
            self._say(print_header, f"Training {learner.description}")

            self._say(print_step, 1, 3, f"Loading {csv}")
            train, test = self._split(Path(csv), Path(test_csv) if test_csv else None)
            self._say(print_info, f"  train {train.n_rows} rows, test {test.n_rows} rows\n")

            self._say(print_step, 2, 3, "Fitting")
            result = learner.train(train, test)
            if not result:
                raise StrokeClassifierError(result.error_message)

            self._say(print_step, 3, 3, f"Writing {model_out}")
            save_model(result.model, tracker.file(model_out))

            summary = summary_text(learner.description, result.model, train, test, result)
            summary_path = tracker.file(model_out.parent / f"{model_out.stem}_summary.txt")
            summary_path.write_text(summary, encoding='utf-8')

            if isinstance(result.model, ForestModel):
                ReportGenerator.write_importance(
                    result.model.feature_names,
                    feature_importance(result.model),
                    tracker.file(model_out.parent / f"{model_out.stem}_importance.csv"),
                )

            self._say(print_info, summary)
            self._say(
                print_success,
                f"train accuracy {result.train_accuracy:.4f}, "
                f"test accuracy {result.test_accuracy:.4f}"
            )
            return {
                'train_accuracy': result.train_accuracy,
                'test_accuracy': result.test_accuracy,
                **result.details,
            }

        return self._run_stage('train', body)

    # ------------------------------------------------------------ evaluate

    def evaluate(self, model_file: Path, csv: Path, report_dir: Path) -> StageResult:
        """评估模型并写出报告与 ROC 点文件"""

        def body(tracker: OutputTracker) -> Dict[str, Any]:
            self._say(print_header, "Evaluating model")
            model = load_model(model_file)
            ds = align_to_model(read_csv(csv), model.feature_names, model.class_names)
            evaluation = evaluate_model(model, ds)
            self._write_evaluation(
                tracker, evaluation, Path(report_dir),
                {'model': Path(model_file).name, 'data': Path(csv).name},
            )
            self._say(
                print_success,
                f"accuracy {evaluation.report.accuracy:.4f} on {evaluation.report.n_test} rows"
            )
            return {'accuracy': evaluation.report.accuracy, 'n_test': evaluation.report.n_test}

        return self._run_stage('evaluate', body)

    # ------------------------------------------------------------ export-dot

    def export_dot(
        self,
        model_file: Path,
        dot_out: Path,
        tree_index: Optional[int] = None
    ) -> StageResult:
        """
        写出 DOT 文件

        随机森林必须用 tree_index 指定一棵树。
        """

        def body(tracker: OutputTracker) -> Dict[str, Any]:
            model = load_model(model_file)
            if isinstance(model, ForestModel):
                if tree_index is None:
                    raise StrokeClassifierError(
                        "Model is a forest; select one tree with --tree INDEX"
                    )
                if not 0 <= tree_index < model.n_trees:
                    raise StrokeClassifierError(
                        f"Tree index {tree_index} outside [0, {model.n_trees})"
                    )
                tree: TreeModel = model.trees[tree_index]
            else:
                if tree_index not in (None, 0):
                    raise StrokeClassifierError("Model is a single tree; --tree must be 0")
                tree = model
            path = write_dot(tree, tracker.file(Path(dot_out)))
            n_nodes, n_edges = count_nodes_and_edges(path.read_text(encoding='utf-8'))
            self._say(print_success, f"Wrote {n_nodes} nodes, {n_edges} edges to {dot_out}")
            return {'n_nodes': n_nodes, 'n_edges': n_edges, 'depth': tree.depth}

        return self._run_stage('export-dot', body)

    # ------------------------------------------------------------ compare

    def compare(self, model_files: Sequence[Path], csv: Path, out_dir: Path) -> StageResult:
        """在同一数据集上对比多个模型文件"""

        def body(tracker: OutputTracker) -> Dict[str, Any]:
            if not model_files:
                raise StrokeClassifierError("No model files to compare")
            self._say(print_header, "Comparing models")
            data = read_csv(csv)
            reports: List[Tuple[str, EvalReport]] = []
            names = _unique_names([Path(m).stem for m in model_files])
            for step, (name, model_file) in enumerate(zip(names, model_files), 1):
                self._say(print_step, step, len(model_files), name)
                model = load_model(model_file)
                ds = align_to_model(data, model.feature_names, model.class_names)
                reports.append((name, evaluate_model(model, ds).report))

            out = tracker.directory(Path(out_dir))
            tracker.file(out / 'comparison.txt')
            tracker.file(out / 'comparison.csv')
            write_comparison(reports, out, self.config.overlapping_pair)
            self._say(print_success, f"Comparison written to {out}")
            return {'accuracy': {name: r.accuracy for name, r in reports}}

        return self._run_stage('compare', body)

    # ------------------------------------------------------------ overlap

    def overlap(
        self,
        csv: Path,
        out_dir: Path,
        pairs: Optional[Sequence[Tuple[str, str]]] = None
    ) -> StageResult:
        """
        类别对在谱质心 / 过零率上的重叠分析

        未指定 pairs 时取配置中的重叠类别对加上对照类别对，跳过表中没有的类别。
        """

        def body(tracker: OutputTracker) -> Dict[str, Any]:
            self._say(print_header, "Feature overlap")
            ds = read_csv(csv)
            if pairs:
                chosen = [tuple(p) for p in pairs]
            else:
                chosen = []
                for pair in (self.config.overlapping_pair,) + CONTRAST_PAIRS:
                    if all(c in ds.class_names for c in pair):
                        chosen.append(tuple(pair))
                    else:
                        self._say(
                            print_warning, f"  skipped {pair[0]} / {pair[1]}: class not in table"
                        )
            if not chosen:
                raise DatasetError(f"No class pair to analyze in {csv}")

            out = tracker.directory(Path(out_dir))
            tracker.file(out / 'overlap.txt')
            tracker.file(out / 'overlap.csv')
            for a, b in chosen:
                tracker.file(out / f"points_{a}_{b}.csv")
            write_overlap(ds, chosen, out)
            self._say(print_success, f"Overlap analysis written to {out}")
            return {'pairs': chosen}

        return self._run_stage('overlap', body)

    # ------------------------------------------------------------ experiment

    def experiment(
        self,
        csvs: Sequence[Path],
        out_dir: Path,
        algorithms: Sequence[str] = ALGORITHMS
    ) -> StageResult:
        """
        对每个特征表做同一划分，训练并评估每种算法

        输出:
            out_dir/<csv stem>/<algo>.yaml          模型
            out_dir/<csv stem>/<algo>/report.*      评估报告
            out_dir/<csv stem>/comparison.{txt,csv} 单数据集对比
            out_dir/comparison.{txt,csv}            全部数据集对比
        """
        cfg = self.config

        def body(tracker: OutputTracker) -> Dict[str, Any]:
            if not csvs:
                raise StrokeClassifierError("No feature tables given")
            for algorithm in algorithms:
                get_learner(algorithm)
            self._say(print_header, "Classifier comparison experiment")

            out = tracker.directory(Path(out_dir))
            everything: List[Tuple[str, EvalReport]] = []
            stems = _unique_names([Path(c).stem for c in csvs])
            for step, (stem, csv) in enumerate(zip(stems, csvs), 1):
                self._say(print_step, step, len(csvs), f"{csv}")
                train, test = self._split(Path(csv), None)
                run_dir = tracker.directory(out / stem)
                reports: List[Tuple[str, EvalReport]] = []
                for algorithm in algorithms:
                    learner = get_learner(algorithm, cfg.tree, cfg.forest_params())
                    result = learner.train(train, test)
                    if not result:
                        raise StrokeClassifierError(f"{algorithm}: {result.error_message}")
                    save_model(result.model, tracker.file(run_dir / f"{algorithm}{MODEL_SUFFIX}"))
                    evaluation = evaluate_model(result.model, test)
                    self._write_evaluation(
                        tracker, evaluation, run_dir / algorithm,
                        {'model': learner.description, 'data': Path(csv).name},
                    )
                    self._say(
                        print_info,
                        f"  {algorithm:<7} test accuracy {evaluation.report.accuracy:.4f}"
                    )
                    reports.append((algorithm, evaluation.report))
                    everything.append((f"{stem}:{algorithm}", evaluation.report))

                tracker.file(run_dir / 'comparison.txt')
                tracker.file(run_dir / 'comparison.csv')
                write_comparison(reports, run_dir, cfg.overlapping_pair)

            tracker.file(out / 'comparison.txt')
            tracker.file(out / 'comparison.csv')
            write_comparison(everything, out, cfg.overlapping_pair)
            self._say(print_success, f"Experiment written to {out}")
            return {'accuracy': {name: r.accuracy for name, r in everything}}

        return self._run_stage('experiment', body)


def _unique_names(names: Sequence[str]) -> List[str]:
    """重名时追加序号 (a, a_2, a_3 ...)"""
    seen: Dict[str, int] = {}
    unique = []
    for name in names:
        seen[name] = seen.get(name, 0) + 1
        unique.append(name if seen[name] == 1 else f"{name}_{seen[name]}")
    return unique


def summary_text(
    description: str,
    model: Model,
    train: Dataset,
    test: Dataset,
    result: Any
) -> str:
    """训练汇总 (Markdown)"""
    lines = [
        f"# Training summary - {description}",
        "",
        f"- **classes**: {len(model.class_names)}",
        f"- **features**: {len(model.feature_names)}",
        f"- **train rows**: {train.n_rows}",
        f"- **test rows**: {test.n_rows}",
        f"- **train accuracy**: {fmt(result.train_accuracy)}",
        f"- **test accuracy**: {fmt(result.test_accuracy)}",
    ]
    details = dict(result.details)
    top = details.pop('top_features', None)
    for key, value in details.items():
        if isinstance(value, float):
            value = fmt(value)
        if value is not None:
            lines.append(f"- **{key}**: {value}")
    if top:
        lines += ["", "## Top features", ""]
        lines += [f"{i}. {name} ({fmt(v)})" for i, (name, v) in enumerate(top, 1)]
    return "\n".join(lines) + "\n"
