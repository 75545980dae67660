#!/usr/bin/env python3
"""
Tabla Stroke Classifier - CLI

子命令: synth, extract, train, evaluate, export-dot, compare, experiment。
参数优先级: 命令行 > 配置文件 (.tsc.yaml 或 -c FILE) > 默认值。
"""

import argparse
import sys
from dataclasses import replace
from pathlib import Path
from typing import List, Optional

from . import __version__
from .errors import StrokeClassifierError
from .learners import ALGORITHMS
from .pipeline import Orchestrator, PipelineConfig, load_config
from .utils import Colors, configure_console, print_error


def main(argv: Optional[List[str]] = None) -> int:
    """CLI 入口"""
    parser = _build_parser()
    args = parser.parse_args(argv)
    configure_console(quiet=args.quiet)

    if not args.command:
        parser.print_help()
        print(f"\n{Colors.YELLOW}示例: tsc synth corpus/ --clips 50{Colors.NC}")
        return 0

    try:
        config = apply_overrides(
            load_config(Path(args.config) if args.config else None), args
        )
    except StrokeClassifierError as e:
        print_error(f"错误: {e}")
        return 1

    result = _run(Orchestrator(config, verbose=not args.quiet), args)
    return 0 if result.success else 1


def _build_parser() -> argparse.ArgumentParser:
    """构建命令行解析器"""
    parser = argparse.ArgumentParser(
        prog='tsc',
        description='Tabla Stroke Classifier - 塔布拉鼓击打分类',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
使用方式:
  tsc synth corpus/ --clips 50                   生成合成语料
  tsc extract corpus/ features.csv               提取特征表
  tsc train features.csv --algo forest -o f.yaml 训练模型
  tsc evaluate f.yaml features.csv -o report/    评估并写出 ROC
  tsc export-dot cart.yaml -o tree.dot           导出决策树
  tsc experiment a.csv b.csv -o experiment/      三种算法对比
  tsc overlap features.csv --pair ti ta          谱质心 / 过零率重叠分析
        """
    )
    parser.add_argument('-c', '--config', metavar='FILE',
                        help='指定配置文件路径 (默认: 当前目录的 .tsc.yaml)')
    parser.add_argument('-q', '--quiet', action='store_true',
                        help='静默模式 (只输出错误)')
    parser.add_argument('-v', '--version', action='version',
                        version=f'%(prog)s {__version__}')

    sub = parser.add_subparsers(dest='command', metavar='COMMAND')

    # synth
    p = sub.add_parser('synth', help='生成合成击打语料')
    p.add_argument('out_dir', help='输出目录 (每类一个子目录)')
    p.add_argument('--spec', metavar='FILE', help='语料描述文件 (默认: 内置 13 类预设)')
    p.add_argument('--clips', type=int, metavar='N', help='每类片段数 (默认: 50)')
    p.add_argument('--no-variation', action='store_true', help='关闭片段间随机扰动')
    p.add_argument('--detune-cents', type=float, help='移调标准差, 音分 (默认: 12)')
    p.add_argument('--amp-jitter', type=float, help='分音幅度对数标准差 (默认: 0.15)')
    p.add_argument('--decay-jitter', type=float, help='衰减时间对数标准差 (默认: 0.15)')
    p.add_argument('--noise-jitter', type=float, help='噪声幅度对数标准差 (默认: 0.2)')
    _add_seed(p)
    _add_audio(p)

    # extract
    p = sub.add_parser('extract', help='提取特征表 (CSV)')
    p.add_argument('in_dir', help='语料目录 (子目录名即类别)')
    p.add_argument('out_csv', help='输出 CSV')
    _add_analysis(p)
    _add_audio(p)
    p.add_argument('--duration', type=float, metavar='SEC', help='截取时长 (默认: 0.5)')
    p.add_argument('--short-duration', type=float, metavar='SEC',
                   help='短击打截取时长 (默认: 0.3)')
    p.add_argument('--no-normalize', action='store_true', help='不做峰值归一化')

    # train
    p = sub.add_parser('train', help='训练模型')
    p.add_argument('csv', help='特征表 (未给出 --test-csv 时在其上做 70/30 分层划分)')
    p.add_argument('--algo', choices=ALGORITHMS, default='cart', help='算法 (默认: cart)')
    p.add_argument('-o', '--model-out', default='model.yaml', help='模型文件 (默认: model.yaml)')
    p.add_argument('--test-csv', metavar='FILE', help='独立测试集 (跳过划分)')
    _add_learner(p)
    _add_split(p)

    # evaluate
    p = sub.add_parser('evaluate', help='评估模型')
    p.add_argument('model', help='模型文件')
    p.add_argument('csv', help='特征表')
    p.add_argument('-o', '--report-dir', default='report', help='报告目录 (默认: report)')

    # export-dot
    p = sub.add_parser('export-dot', help='导出决策树 DOT 文件')
    p.add_argument('model', help='模型文件')
    p.add_argument('-o', '--out', default='tree.dot', help='DOT 文件 (默认: tree.dot)')
    p.add_argument('--tree', type=int, metavar='INDEX', help='随机森林中的树下标 (森林必填)')

    # compare
    p = sub.add_parser('compare', help='在同一特征表上对比多个模型')
    p.add_argument('csv', help='特征表')
    p.add_argument('models', nargs='+', help='模型文件')
    p.add_argument('-o', '--out-dir', default='comparison', help='输出目录 (默认: comparison)')

    # overlap
    p = sub.add_parser('overlap', help='类别对在谱质心 / 过零率上的重叠分析')
    p.add_argument('csv', help='特征表')
    p.add_argument('-o', '--out-dir', default='overlap', help='输出目录 (默认: overlap)')
    p.add_argument('--pair', nargs=2, action='append', metavar=('A', 'B'),
                   help='类别对, 可重复 (默认: 配置中的重叠类别对 + dha/dhin, tin/din)')

    # experiment
    p = sub.add_parser('experiment', help='对每个特征表做同一划分并对比三种算法')
    p.add_argument('csvs', nargs='+', help='特征表 (可多个)')
    p.add_argument('-o', '--out-dir', default='experiment', help='输出目录 (默认: experiment)')
    p.add_argument('--algos', nargs='+', choices=ALGORITHMS, default=list(ALGORITHMS),
                   help='参与对比的算法 (默认: cart id3 forest)')
    _add_learner(p)
    _add_split(p)

    return parser


def _add_seed(p: argparse.ArgumentParser) -> None:
    p.add_argument('--seed', type=int, help='随机种子 (默认: 7)')


def _add_audio(p: argparse.ArgumentParser) -> None:
    p.add_argument('--rate', type=int, metavar='HZ', help='采样率 (默认: 44100)')


def _add_analysis(p: argparse.ArgumentParser) -> None:
    p.add_argument('--frame-len', type=int, help='帧长, 2 的幂 (默认: 512)')
    p.add_argument('--hop', type=int, help='帧移 (默认: 256)')
    p.add_argument('--texture-frames', type=int,
                   help='纹理窗帧数, 1 表示整段一个实例 (默认: 1)')
    p.add_argument('--n-mels', type=int, help='mel 滤波器数 (默认: 40)')
    p.add_argument('--n-mfcc', type=int, help='MFCC 个数 (默认: 13)')
    p.add_argument('--rolloff', type=float, help='滚降能量比例 (默认: 0.85)')


def _add_learner(p: argparse.ArgumentParser) -> None:
    p.add_argument('--criterion', choices=('gini', 'entropy'),
                   help='CART / 森林的划分准则 (默认: gini)')
    p.add_argument('--max-depth', type=int, help='最大深度 (默认: 不限)')
    p.add_argument('--min-leaf', type=int, help='叶子最少样本数 (默认: 1)')
    p.add_argument('--min-gain', type=float, help='最小不纯度下降 (默认: 0)')
    p.add_argument('--bins', type=int, help='ID3 等频分箱数 (默认: 8)')
    p.add_argument('--trees', type=int, help='森林中树的数量 (默认: 100)')
    p.add_argument('--mtry', type=int, help='每个节点候选特征数 (默认: floor(sqrt(F)))')
    p.add_argument('--oob', action='store_true', help='计算袋外准确率')
    p.add_argument('--jobs', type=int, help='并行训练进程数 (默认: 1)')
    _add_seed(p)


def _add_split(p: argparse.ArgumentParser) -> None:
    p.add_argument('--split-seed', type=int, help='划分随机种子 (默认: 42)')
    p.add_argument('--train-fraction', type=float, help='训练集比例 (默认: 0.7)')


def _given(args: argparse.Namespace, **mapping: str) -> dict:
    """取出命令行上给出的参数: {字段名: 值}"""
    values = {}
    for field_name, attr in mapping.items():
        value = getattr(args, attr, None)
        if value is not None:
            values[field_name] = value
    return values


def apply_overrides(config: PipelineConfig, args: argparse.Namespace) -> PipelineConfig:
    """
    用命令行参数覆盖配置

    Args:
        config: 配置文件 (或默认) 给出的配置
        args: 解析后的命令行参数

    Returns:
        新的 PipelineConfig
    """
    analysis = replace(config.analysis, **_given(
        args, frame_len='frame_len', hop='hop', texture_frames='texture_frames',
        n_mels='n_mels', n_mfcc='n_mfcc', rolloff_fraction='rolloff',
    ))

    audio = replace(config.audio, **_given(
        args, sample_rate_hz='rate', clip_duration_s='duration',
        short_duration_s='short_duration',
    ))
    if getattr(args, 'no_normalize', False):
        audio = replace(audio, normalize=False)

    tree = replace(config.tree, **_given(
        args, criterion='criterion', max_depth='max_depth', min_leaf='min_leaf',
        min_gain='min_gain', id3_bins='bins',
    ))
    forest_tree = replace(config.forest.tree_params, **_given(args, criterion='criterion'))
    forest = replace(
        config.forest,
        tree_params=forest_tree,
        **_given(args, n_trees='trees', mtry='mtry', n_jobs='jobs'),
    )
    if getattr(args, 'oob', False):
        forest = replace(forest, compute_oob=True)

    variation = replace(config.synth.variation, **_given(
        args, detune_cents='detune_cents', amp_jitter='amp_jitter',
        decay_jitter='decay_jitter', noise_jitter='noise_jitter',
    ))
    if getattr(args, 'no_variation', False):
        variation = replace(variation, detune_cents=0.0, amp_jitter=0.0,
                            decay_jitter=0.0, noise_jitter=0.0)
    synth = replace(config.synth, variation=variation)

    split = replace(config.split, **_given(
        args, split_seed='split_seed', train_fraction='train_fraction',
    ))

    return replace(
        config,
        analysis=analysis,
        audio=audio,
        tree=tree,
        forest=forest,
        synth=synth,
        split=split,
        **_given(args, seed='seed'),
    )


def _run(orchestrator: Orchestrator, args: argparse.Namespace):
    """分派子命令"""
    command = args.command
    if command == 'synth':
        return orchestrator.synth(
            Path(args.out_dir),
            Path(args.spec) if args.spec else None,
            args.clips,
        )
    if command == 'extract':
        return orchestrator.extract(Path(args.in_dir), Path(args.out_csv))
    if command == 'train':
        return orchestrator.train(
            Path(args.csv),
            args.algo,
            Path(args.model_out),
            Path(args.test_csv) if args.test_csv else None,
        )
    if command == 'evaluate':
        return orchestrator.evaluate(Path(args.model), Path(args.csv), Path(args.report_dir))
    if command == 'export-dot':
        return orchestrator.export_dot(Path(args.model), Path(args.out), args.tree)
    if command == 'compare':
        return orchestrator.compare([Path(m) for m in args.models], Path(args.csv),
                                    Path(args.out_dir))
    if command == 'overlap':
        return orchestrator.overlap(Path(args.csv), Path(args.out_dir), args.pair)
    return orchestrator.experiment([Path(c) for c in args.csvs], Path(args.out_dir), args.algos)


if __name__ == "__main__":
    sys.exit(main())
