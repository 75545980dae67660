"""
DOT Export - 决策树的 Graphviz 描述

只生成 DOT 文本，不依赖 Graphviz 可执行程序。
每个节点标注: 划分规则、该节点的 gini / entropy、样本数、多数类。
"""

from pathlib import Path
from typing import Iterator, Tuple, Union

import graphviz

from .tree import Bins, Threshold, TreeModel, TreeNode

LEAF_COLOR = '#90EE90'
SPLIT_COLOR = '#87CEEB'


def criterion_label(model: TreeModel) -> str:
    """节点标注使用的度量名 (info_gain 显示为 entropy)"""
    return 'gini' if model.params.criterion == 'gini' else 'entropy'


def _fmt(value: float) -> str:
    return f"{value:.6g}"


def _branch_labels(rule: Union[Threshold, Bins]) -> Iterator[str]:
    if isinstance(rule, Threshold):
        yield f"<= {_fmt(rule.t)}"
        yield f"> {_fmt(rule.t)}"
        return
    inner = rule.edges[1:-1]
    for b in range(rule.n_branches):
        if b == 0:
            yield f"< {_fmt(inner[0])}"
        elif b == rule.n_branches - 1:
            yield f">= {_fmt(inner[-1])}"
        else:
            yield f"[{_fmt(inner[b - 1])}, {_fmt(inner[b])})"


def node_label(model: TreeModel, node: TreeNode) -> str:
    """单个节点的标注文本 (DOT 中以 \\n 换行)"""
    lines = []
    if not node.is_leaf:
        name = model.feature_names[node.feature_index]
        if isinstance(node.rule, Threshold):
            lines.append(f"{name} <= {_fmt(node.rule.t)}")
        else:
            lines.append(f"{name} ({node.rule.n_branches} bins)")
    lines.append(f"{criterion_label(model)} = {node.impurity:.3f}")
    lines.append(f"samples = {node.n_samples}")
    lines.append(f"class = {model.class_names[node.distribution.majority]}")
    return '\\n'.join(lines)


def to_digraph(model: TreeModel, name: str = 'tree') -> graphviz.Digraph:
    """
    构造 graphviz.Digraph

    节点按先序编号 n0, n1, ...；没有子树的箱不画节点。
    """
    dot = graphviz.Digraph(name, comment=f'{model.algorithm} decision tree')
    dot.attr('node', shape='box', style='rounded,filled', fontname='helvetica')

    counter = iter(range(model.n_nodes))

    def _add(node: TreeNode) -> str:
        node_id = f"n{next(counter)}"
        dot.node(
            node_id,
            node_label(model, node),
            fillcolor=LEAF_COLOR if node.is_leaf else SPLIT_COLOR,
        )
        if node.rule is not None:
            for child, label in zip(node.children, _branch_labels(node.rule)):
                if child is not None:
                    dot.edge(node_id, _add(child), label=label)
        return node_id

    _add(model.root)
    return dot


def export_dot(model: TreeModel) -> str:
    """返回 DOT 文本"""
    return to_digraph(model).source


def write_dot(model: TreeModel, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.write_text(export_dot(model), encoding='utf-8')
    return path


def count_nodes_and_edges(dot_text: str) -> Tuple[int, int]:
    """统计 DOT 文本中的节点数和边数 (用于汇总输出)"""
    nodes = edges = 0
    for line in dot_text.splitlines():
        stripped = line.strip()
        if '->' in stripped:
            edges += 1
        elif stripped.startswith('n') and '[label=' in stripped:
            nodes += 1
    return nodes, edges
