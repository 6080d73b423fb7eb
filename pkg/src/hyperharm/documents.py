"""JSON documents for trees, indices and points.

Trees: ``{"leaf2": null} | {"leaf3": null} | {"split": {"left": T, "right": T}} | {"axis": T}``.
Indices and points mirror the tree: ``{"m"}``/``{"phi"}`` at leaf2,
``{"l", "m"}``/``{"theta", "phi"}`` at leaf3, ``{"J", "left", "right"}``/
``{"theta", "left", "right"}`` at a split and ``{"J", "child"}``/
``{"theta", "child"}`` at an axis node.  Parse errors are TreeErrors that
name the offending node path.
"""
import json
import math
import numbers

from .trees import (
    Axis,
    AxisIndex,
    AxisPoint,
    Leaf2,
    Leaf2Index,
    Leaf2Point,
    Leaf3,
    Leaf3Index,
    Leaf3Point,
    Split,
    SplitIndex,
    SplitPoint,
    TreeError,
    check_index,
    check_point,
    check_tree,
)


def _object(doc, keys, path):
    if not isinstance(doc, dict):
        raise TreeError(f"expected a JSON object, got {type(doc).__name__}", path)
    missing = [k for k in keys if k not in doc]
    extra = [k for k in doc if k not in keys]
    if missing:
        raise TreeError(f"missing key(s) {', '.join(missing)}", path)
    if extra:
        raise TreeError(f"unexpected key(s) {', '.join(sorted(extra))}", path)
    return doc


def _integer(value, name, path):
    if isinstance(value, bool) or not isinstance(value, int):
        raise TreeError(f"{name} must be an integer, got {value!r}", path)
    return value


def _angle(value, name, path):
    if isinstance(value, bool) or not isinstance(value, numbers.Real) or not math.isfinite(value):
        raise TreeError(f"{name} must be a finite number, got {value!r}", path)
    return float(value)


def tree_from_doc(doc, path="root"):
    tree = _tree(doc, path)
    check_tree(tree)
    return tree


def _tree(doc, path):
    if not isinstance(doc, dict) or len(doc) != 1:
        raise TreeError("a tree node is an object with exactly one of leaf2, leaf3, split, axis", path)
    (kind, body), = doc.items()
    if kind in ("leaf2", "leaf3"):
        if body is not None:
            raise TreeError(f"{kind} takes null, got {body!r}", path)
        return Leaf2() if kind == "leaf2" else Leaf3()
    if kind == "split":
        _object(body, ("left", "right"), path)
        return Split(_tree(body["left"], path + ".left"), _tree(body["right"], path + ".right"))
    if kind == "axis":
        return Axis(_tree(body, path + ".child"))
    raise TreeError(f"unknown node kind {kind!r}", path)


def tree_to_doc(tree):
    if isinstance(tree, Leaf2):
        return {"leaf2": None}
    if isinstance(tree, Leaf3):
        return {"leaf3": None}
    if isinstance(tree, Split):
        return {"split": {"left": tree_to_doc(tree.left), "right": tree_to_doc(tree.right)}}
    if isinstance(tree, Axis):
        return {"axis": tree_to_doc(tree.child)}
    raise TreeError(f"unknown node kind {type(tree).__name__}")


def index_from_doc(tree, doc, path="root"):
    """Parse an index document against ``tree`` and check it (shape, integer ranks, |m| <= l)."""
    index = _index(tree, doc, path)
    check_index(tree, index, path)
    return index


def _index(tree, doc, path):
    if isinstance(tree, Leaf2):
        _object(doc, ("m",), path)
        return Leaf2Index(_integer(doc["m"], "m", path))
    if isinstance(tree, Leaf3):
        _object(doc, ("l", "m"), path)
        return Leaf3Index(_integer(doc["l"], "l", path), _integer(doc["m"], "m", path))
    if isinstance(tree, Split):
        _object(doc, ("J", "left", "right"), path)
        return SplitIndex(
            _integer(doc["J"], "J", path),
            _index(tree.left, doc["left"], path + ".left"),
            _index(tree.right, doc["right"], path + ".right"),
        )
    _object(doc, ("J", "child"), path)
    return AxisIndex(_integer(doc["J"], "J", path), _index(tree.child, doc["child"], path + ".child"))


def index_to_doc(index):
    if isinstance(index, Leaf2Index):
        return {"m": index.m}
    if isinstance(index, Leaf3Index):
        return {"l": index.l, "m": index.m}
    if isinstance(index, SplitIndex):
        return {"J": index.J, "left": index_to_doc(index.left), "right": index_to_doc(index.right)}
    return {"J": index.J, "child": index_to_doc(index.child)}


def point_from_doc(tree, doc, path="root"):
    """Parse a point document against ``tree``; angles must lie in their chart ranges."""
    point = _point(tree, doc, path)
    check_point(tree, point, path)
    return point


def _point(tree, doc, path):
    if isinstance(tree, Leaf2):
        _object(doc, ("phi",), path)
        return Leaf2Point(_angle(doc["phi"], "phi", path))
    if isinstance(tree, Leaf3):
        _object(doc, ("theta", "phi"), path)
        return Leaf3Point(_angle(doc["theta"], "theta", path), _angle(doc["phi"], "phi", path))
    if isinstance(tree, Split):
        _object(doc, ("theta", "left", "right"), path)
        return SplitPoint(
            _angle(doc["theta"], "theta", path),
            _point(tree.left, doc["left"], path + ".left"),
            _point(tree.right, doc["right"], path + ".right"),
        )
    _object(doc, ("theta", "child"), path)
    return AxisPoint(_angle(doc["theta"], "theta", path), _point(tree.child, doc["child"], path + ".child"))


def point_to_doc(point):
    if isinstance(point, Leaf2Point):
        return {"phi": float(point.phi)}
    if isinstance(point, Leaf3Point):
        return {"theta": float(point.theta), "phi": float(point.phi)}
    if isinstance(point, SplitPoint):
        return {"theta": float(point.theta), "left": point_to_doc(point.left), "right": point_to_doc(point.right)}
    return {"theta": float(point.theta), "child": point_to_doc(point.child)}


def flatten(doc, prefix=""):
    """Leaf values of a nested index/point document as ``[(dotted_key, value), ...]``, depth-first."""
    out = []
    for key, value in doc.items():
        name = f"{prefix}.{key}" if prefix else key
        if isinstance(value, dict):
            out.extend(flatten(value, name))
        else:
            out.append((name, value))
    return out


def dumps(doc):
    return json.dumps(doc, sort_keys=False)


def loads(text, what="document"):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise TreeError(f"invalid JSON in {what}: {exc.msg} (line {exc.lineno}, column {exc.colno})") from None
