"""
Model Files - 模型的 YAML 序列化

文档结构:
    format: tabla-stroke-model
    version: 1
    kind: tree | forest
    feature_names / class_names
    tree: {algorithm, params, root}            (kind = tree)
    forest: {params, oob_score, trees: [...]}  (kind = forest)

浮点数以 repr 写出，load_model(save_model(m)) 的预测与 m 完全一致。
"""

from dataclasses import asdict
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import numpy as np
import yaml

from ..errors import ModelFormatError, StrokeClassifierError
from .forest import ForestModel, ForestParams
from .impurity import ClassDistribution
from .tree import Bins, Threshold, TreeModel, TreeNode, TreeParams

try:
    from yaml import CSafeLoader as _Loader
except ImportError:  # pragma: no cover - 没有 libyaml 时退回纯 Python 实现
    from yaml import SafeLoader as _Loader  # type: ignore[assignment]

MODEL_FORMAT = 'tabla-stroke-model'
MODEL_VERSION = 1

Model = Union[TreeModel, ForestModel]


# ---------------------------------------------------------------- to dict

def _node_to_dict(node: TreeNode) -> Dict[str, Any]:
    data: Dict[str, Any] = {
        'counts': [int(c) for c in node.distribution.counts],
        'impurity': float(node.impurity),
    }
    if node.is_leaf:
        return data
    data['feature'] = int(node.feature_index)
    data['gain'] = float(node.gain)
    if isinstance(node.rule, Threshold):
        data['threshold'] = float(node.rule.t)
    else:
        data['edges'] = [float(e) for e in node.rule.edges]
    data['children'] = [None if c is None else _node_to_dict(c) for c in node.children]
    return data


def _tree_params_to_dict(params: TreeParams) -> Dict[str, Any]:
    return asdict(params)


def model_to_dict(model: Model) -> Dict[str, Any]:
    """模型 -> 可 YAML 序列化的字典"""
    doc: Dict[str, Any] = {
        'format': MODEL_FORMAT,
        'version': MODEL_VERSION,
        'kind': 'forest' if isinstance(model, ForestModel) else 'tree',
        'feature_names': list(model.feature_names),
        'class_names': list(model.class_names),
    }
    if isinstance(model, TreeModel):
        doc['tree'] = {
            'algorithm': model.algorithm,
            'params': _tree_params_to_dict(model.params),
            'root': _node_to_dict(model.root),
        }
        return doc

    params = model.params
    doc['forest'] = {
        'params': {
            'n_trees': params.n_trees,
            'mtry': params.mtry,
            'seed': params.seed,
            'bootstrap': params.bootstrap,
            'compute_oob': params.compute_oob,
            'tree_params': _tree_params_to_dict(params.tree_params),
        },
        'oob_score': model.oob_score,
        'trees': [
            {
                'root': _node_to_dict(tree.root),
                'rows': [int(i) for i in rows],
            }
            for tree, rows in zip(model.trees, _rows_or_empty(model))
        ],
    }
    return doc


def _rows_or_empty(model: ForestModel) -> List[np.ndarray]:
    if model.bootstrap_indices:
        return list(model.bootstrap_indices)
    return [np.zeros(0, dtype=np.int64) for _ in model.trees]


# ---------------------------------------------------------------- from dict

def _require(data: Dict[str, Any], key: str, where: str) -> Any:
    if not isinstance(data, dict) or key not in data:
        raise ModelFormatError(f"Missing '{key}' in {where}")
    return data[key]


def _node_from_dict(data: Dict[str, Any]) -> TreeNode:
    dist = ClassDistribution(_require(data, 'counts', 'node'))
    impurity = float(_require(data, 'impurity', 'node'))
    if 'feature' not in data:
        return TreeNode(dist, impurity)
    if 'threshold' in data:
        rule: Union[Threshold, Bins] = Threshold(float(data['threshold']))
    else:
        rule = Bins(tuple(_require(data, 'edges', 'node')))
    children = tuple(
        None if c is None else _node_from_dict(c)
        for c in _require(data, 'children', 'node')
    )
    if len(children) != rule.n_branches:
        raise ModelFormatError(
            f"Node has {len(children)} children but its rule has {rule.n_branches} branches"
        )
    return TreeNode(
        distribution=dist,
        impurity=impurity,
        feature_index=int(data['feature']),
        rule=rule,
        children=children,
        gain=float(data.get('gain', 0.0)),
    )


def _tree_params_from_dict(data: Dict[str, Any]) -> TreeParams:
    try:
        return TreeParams(**data).validate()
    except TypeError as e:
        raise ModelFormatError(f"Invalid tree params: {e}") from e


def model_from_dict(doc: Dict[str, Any]) -> Model:
    """字典 -> 模型 (校验 format / version)"""
    if not isinstance(doc, dict):
        raise ModelFormatError("Model document must be a mapping")
    if doc.get('format') != MODEL_FORMAT:
        raise ModelFormatError(f"Not a model file (format: {doc.get('format')!r})")
    if doc.get('version') != MODEL_VERSION:
        raise ModelFormatError(f"Unsupported model version: {doc.get('version')!r}")

    feature_names = tuple(_require(doc, 'feature_names', 'model'))
    class_names = tuple(_require(doc, 'class_names', 'model'))
    kind = _require(doc, 'kind', 'model')

    try:
        if kind == 'tree':
            tree = _require(doc, 'tree', 'model')
            return TreeModel(
                root=_node_from_dict(_require(tree, 'root', 'tree')),
                params=_tree_params_from_dict(_require(tree, 'params', 'tree')),
                feature_names=feature_names,
                class_names=class_names,
                algorithm=tree.get('algorithm', 'cart'),
            )
        if kind == 'forest':
            forest = _require(doc, 'forest', 'model')
            raw = dict(_require(forest, 'params', 'forest'))
            tree_params = _tree_params_from_dict(raw.pop('tree_params', {}))
            params = ForestParams(tree_params=tree_params, **raw)
            entries = _require(forest, 'trees', 'forest')
            trees = tuple(
                TreeModel(_node_from_dict(_require(e, 'root', 'forest tree')), tree_params,
                          feature_names, class_names, algorithm='cart')
                for e in entries
            )
            rows = tuple(np.asarray(e.get('rows', []), dtype=np.int64) for e in entries)
            if all(r.size == 0 for r in rows):
                rows = ()
            oob: Optional[float] = forest.get('oob_score')
            return ForestModel(trees, rows, params, feature_names, class_names, oob_score=oob)
    except ModelFormatError:
        raise
    except (StrokeClassifierError, TypeError, ValueError) as e:
        raise ModelFormatError(f"Invalid model: {e}") from e

    raise ModelFormatError(f"Unknown model kind: {kind!r}")


# ---------------------------------------------------------------- files

def dump_model(model: Model) -> str:
    """模型 -> YAML 文本"""
    return yaml.dump(
        model_to_dict(model),
        Dumper=yaml.SafeDumper,
        sort_keys=False,
        default_flow_style=None,
        allow_unicode=True,
        width=100,
    )


def save_model(model: Model, path: Union[str, Path]) -> Path:
    """写出模型文件"""
    path = Path(path)
    path.write_text(dump_model(model), encoding='utf-8')
    return path


def load_model(path: Union[str, Path]) -> Model:
    """
    读取模型文件

    Raises:
        ModelFormatError: 文件不存在、不是 YAML 或结构不对
    """
    path = Path(path)
    if not path.is_file():
        raise ModelFormatError(f"Model file does not exist: {path}")
    try:
        with open(path, 'r', encoding='utf-8') as f:
            doc = yaml.load(f, Loader=_Loader)
    except yaml.YAMLError as e:
        raise ModelFormatError(f"{path}: not a valid YAML document: {e}") from e
    return model_from_dict(doc)
