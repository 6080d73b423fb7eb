import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hyperharm.documents import (
    dumps,
    flatten,
    index_from_doc,
    index_to_doc,
    loads,
    point_from_doc,
    point_to_doc,
    tree_from_doc,
    tree_to_doc,
)
from hyperharm.trees import Axis, Leaf2, Leaf3, Split, TreeError, random_index, random_point

from oracles import TREES_BY_DIM

trees = st.recursive(
    st.sampled_from([Leaf2(), Leaf3()]),
    lambda sub: st.one_of(st.builds(Split, sub, sub), st.builds(Axis, sub)),
    max_leaves=4,
)


@settings(max_examples=60, deadline=None)
@given(tree=trees, seed=st.integers(0, 2**32 - 1), J=st.integers(0, 4))
def test_round_trip(tree, seed, J):
    rng = np.random.default_rng(seed)
    text = dumps(tree_to_doc(tree))
    assert tree_from_doc(loads(text)) == tree
    index = random_index(tree, J, rng)
    assert index_from_doc(tree, json.loads(json.dumps(index_to_doc(index)))) == index
    point = random_point(tree, rng)
    assert point_from_doc(tree, json.loads(json.dumps(point_to_doc(point)))) == point


def test_tree_document_shape():
    doc = tree_to_doc(Split(Leaf2(), Axis(Leaf3())))
    assert doc == {"split": {"left": {"leaf2": None}, "right": {"axis": {"leaf3": None}}}}


@pytest.mark.parametrize(
    "doc, path",
    [
        ({"leaf4": None}, "root"),
        ({"split": {"left": {"leaf2": None}}}, "root"),
        ({"split": {"left": {"leaf2": None}, "right": {"bogus": None}}}, "root.right"),
        ({"axis": {"axis": {"leaf3": 1}}}, "root.child.child"),
        ("leaf2", "root"),
        ({"leaf2": None, "leaf3": None}, "root"),
    ],
)
def test_tree_errors_name_path(doc, path):
    with pytest.raises(TreeError) as exc:
        tree_from_doc(doc)
    assert exc.value.path == path


def test_index_errors():
    tree = Split(Leaf2(), Leaf3())
    good = {"J": 3, "left": {"m": 1}, "right": {"l": 2, "m": -1}}
    assert index_from_doc(tree, good).J == 3
    with pytest.raises(TreeError) as exc:
        index_from_doc(tree, {"J": 3, "left": {"m": 1}, "right": {"l": 2, "m": 3}})
    assert exc.value.path == "root.right"
    with pytest.raises(TreeError):
        index_from_doc(tree, {"J": 3, "left": {"m": True}, "right": {"l": 2, "m": 1}})
    with pytest.raises(TreeError):
        index_from_doc(tree, {"J": 3.0, "left": {"m": 1}, "right": {"l": 2, "m": 1}})
    with pytest.raises(TreeError) as exc:
        index_from_doc(tree, {"J": 3, "left": {"m": 1, "l": 0}, "right": {"l": 2, "m": 1}})
    assert exc.value.path == "root.left"


def test_point_errors():
    tree = Axis(Leaf2())
    assert point_from_doc(tree, {"theta": 1.0, "child": {"phi": 0.5}}).theta == 1.0
    with pytest.raises(TreeError):
        point_from_doc(tree, {"theta": 4.0, "child": {"phi": 0.5}})
    with pytest.raises(TreeError):
        point_from_doc(tree, {"theta": float("nan"), "child": {"phi": 0.5}})
    with pytest.raises(TreeError):
        point_from_doc(tree, {"theta": "1", "child": {"phi": 0.5}})
    with pytest.raises(TreeError) as exc:
        point_from_doc(tree, {"theta": 1.0, "child": {"theta": 0.5}})
    assert exc.value.path == "root.child"


def test_flatten_order():
    doc = {"J": 2, "left": {"m": 1}, "right": {"l": 1, "m": 0}}
    assert flatten(doc) == [("J", 2), ("left.m", 1), ("right.l", 1), ("right.m", 0)]


def test_loads_error():
    with pytest.raises(TreeError) as exc:
        loads("{not json", "tree")
    assert "invalid JSON in tree" in str(exc.value)


@pytest.mark.parametrize("tree", TREES_BY_DIM[5], ids=repr)
def test_point_doc_values(tree):
    p = random_point(tree, np.random.default_rng(0))
    values = [v for _, v in flatten(point_to_doc(p))]
    assert len(values) == tree.dim - 1 and all(isinstance(v, float) and math.isfinite(v) for v in values)
