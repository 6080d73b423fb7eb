"""Parametrization trees and recursively built orthonormal harmonics.

A tree says how the d-dimensional unit vector is cut into sub-vectors:

* ``Leaf2()`` -- a unit 2-vector ``(cos phi, sin phi)``;
* ``Leaf3()`` -- a unit 3-vector ``(cos theta, sin theta cos phi, sin theta sin phi)``;
* ``Split(left, right)`` -- ``(cos theta * left, sin theta * right)``, theta in [0, pi/2];
* ``Axis(child)`` -- ``(cos theta, sin theta * child)``, theta in [0, pi].

Indices (``*Index``) and points (``*Point``) mirror the tree node by node.
Point angles may be numpy arrays; everything broadcasts, which is how
quadrature grids are evaluated.
"""
import functools
import math
import operator
from dataclasses import dataclass
from typing import Any

import numpy as np

from .coefficients import AxisSignature, SplitSignature, y_axis, y_split

#: Largest rank accepted anywhere in the tree.
RANK_CAP = 40

_TWO_PI = 2.0 * math.pi
_INV_SQRT_2PI = 1.0 / math.sqrt(_TWO_PI)


class TreeError(ValueError):
    """Structural mismatch between a tree and an index or point."""

    def __init__(self, reason, path="root"):
        super().__init__(f"{path}: {reason}")
        self.reason = reason
        self.path = path


class ChartSingularityError(ValueError):
    """The point sits on a coordinate singularity of the tree's chart."""

    def __init__(self, path):
        super().__init__(f"point is within the singularity guard at {path}")
        self.path = path


@dataclass(frozen=True)
class Leaf2:
    @property
    def dim(self):
        return 2


@dataclass(frozen=True)
class Leaf3:
    @property
    def dim(self):
        return 3


@dataclass(frozen=True)
class Split:
    left: Any
    right: Any

    @property
    def dim(self):
        return self.left.dim + self.right.dim


@dataclass(frozen=True)
class Axis:
    child: Any

    @property
    def dim(self):
        return self.child.dim + 1


@dataclass(frozen=True)
class Leaf2Index:
    m: int

    @property
    def rank(self):
        return abs(self.m)


@dataclass(frozen=True)
class Leaf3Index:
    l: int
    m: int

    @property
    def rank(self):
        return self.l


@dataclass(frozen=True)
class SplitIndex:
    J: int
    left: Any
    right: Any

    @property
    def rank(self):
        return self.J


@dataclass(frozen=True)
class AxisIndex:
    J: int
    child: Any

    @property
    def rank(self):
        return self.J


@dataclass(frozen=True)
class Leaf2Point:
    phi: Any


@dataclass(frozen=True)
class Leaf3Point:
    theta: Any
    phi: Any


@dataclass(frozen=True)
class SplitPoint:
    theta: Any
    left: Any
    right: Any


@dataclass(frozen=True)
class AxisPoint:
    theta: Any
    child: Any


_TREE_KINDS = (Leaf2, Leaf3, Split, Axis)


def validate_tree(tree, path="root"):
    """Return None for a well-formed tree, else a message naming the bad node."""
    if not isinstance(tree, _TREE_KINDS):
        return f"{path}: unknown node kind {type(tree).__name__}"
    if isinstance(tree, Split):
        parts = (("left", tree.left, "split parts need"), ("right", tree.right, "split parts need"))
    elif isinstance(tree, Axis):
        parts = (("child", tree.child, "axis child needs"),)
    else:
        return None
    for side, child, what in parts:
        sub = f"{path}.{side}"
        if isinstance(child, _TREE_KINDS):
            problem = validate_tree(child, sub)
            if problem:
                return problem
            continue
        dim = getattr(child, "dim", None)
        if isinstance(dim, int) and dim < 2:
            return f"{sub}: {what} dimension >= 2, got {dim}"
        return f"{sub}: unknown node kind {type(child).__name__}"
    return None


def check_tree(tree):
    problem = validate_tree(tree)
    if problem:
        raise TreeError(problem.split(": ", 1)[1], problem.split(": ", 1)[0])
    return tree


def _int(value, name, path):
    try:
        return operator.index(value)
    except TypeError:
        raise TreeError(f"{name} must be an integer, got {value!r}", path) from None


def check_index(tree, index, path="root"):
    """Raise TreeError unless ``index`` has the tree's shape and sane node values.

    Selection rules on the Jacobi/Gegenbauer degree are not checked here: an
    index that violates them is a valid label of the zero function.
    """
    if isinstance(tree, Leaf2):
        if not isinstance(index, Leaf2Index):
            raise TreeError(f"expected a leaf2 index, got {type(index).__name__}", path)
        m = _int(index.m, "m", path)
        if abs(m) > RANK_CAP:
            raise TreeError(f"rank {abs(m)} exceeds the cap {RANK_CAP}", path)
    elif isinstance(tree, Leaf3):
        if not isinstance(index, Leaf3Index):
            raise TreeError(f"expected a leaf3 index, got {type(index).__name__}", path)
        l, m = _int(index.l, "l", path), _int(index.m, "m", path)
        if l < 0 or abs(m) > l:
            raise TreeError(f"need 0 <= |m| <= l, got l={l}, m={m}", path)
        if l > RANK_CAP:
            raise TreeError(f"rank {l} exceeds the cap {RANK_CAP}", path)
    elif isinstance(tree, (Split, Axis)):
        expected = SplitIndex if isinstance(tree, Split) else AxisIndex
        if not isinstance(index, expected):
            kind = "split" if isinstance(tree, Split) else "axis"
            raise TreeError(f"expected a {kind} index, got {type(index).__name__}", path)
        J = _int(index.J, "J", path)
        if J < 0:
            raise TreeError(f"rank must be non-negative, got {J}", path)
        if J > RANK_CAP:
            raise TreeError(f"rank {J} exceeds the cap {RANK_CAP}", path)
        if isinstance(tree, Split):
            check_index(tree.left, index.left, path + ".left")
            check_index(tree.right, index.right, path + ".right")
        else:
            check_index(tree.child, index.child, path + ".child")
    else:
        raise TreeError(f"unknown node kind {type(tree).__name__}", path)
    return index


_POINT_TYPES = {Leaf2: Leaf2Point, Leaf3: Leaf3Point, Split: SplitPoint, Axis: AxisPoint}


def check_point(tree, point, path="root", ranges=True):
    """Raise TreeError unless ``point`` mirrors the tree (and, optionally, angles are in range)."""
    expected = _POINT_TYPES.get(type(tree))
    if expected is None:
        raise TreeError(f"unknown node kind {type(tree).__name__}", path)
    if not isinstance(point, expected):
        raise TreeError(f"expected {expected.__name__}, got {type(point).__name__}", path)

    def in_range(name, lo, hi, closed=True):
        if not ranges:
            return
        v = np.asarray(getattr(point, name), dtype=float)
        ok = (v >= lo) & ((v <= hi) if closed else (v < hi))
        if not np.all(ok):
            bracket = "]" if closed else ")"
            raise TreeError(f"{name} outside [{lo}, {hi}{bracket}", path)

    if isinstance(tree, Leaf2):
        in_range("phi", 0.0, _TWO_PI, closed=False)
    elif isinstance(tree, Leaf3):
        in_range("theta", 0.0, math.pi)
        in_range("phi", 0.0, _TWO_PI, closed=False)
    elif isinstance(tree, Split):
        in_range("theta", 0.0, 0.5 * math.pi)
        check_point(tree.left, point.left, path + ".left", ranges)
        check_point(tree.right, point.right, path + ".right", ranges)
    else:
        in_range("theta", 0.0, math.pi)
        check_point(tree.child, point.child, path + ".child", ranges)
    return point


def _components(tree, point):
    if isinstance(tree, Leaf2):
        return [np.cos(point.phi), np.sin(point.phi)]
    if isinstance(tree, Leaf3):
        st = np.sin(point.theta)
        return [np.cos(point.theta), st * np.cos(point.phi), st * np.sin(point.phi)]
    if isinstance(tree, Split):
        c, s = np.cos(point.theta), np.sin(point.theta)
        return [c * x for x in _components(tree.left, point.left)] + [
            s * x for x in _components(tree.right, point.right)
        ]
    c, s = np.cos(point.theta), np.sin(point.theta)
    return [c] + [s * x for x in _components(tree.child, point.child)]


def embed(tree, point):
    """Cartesian unit vector of ``point``; shape ``(d,)`` or ``(d, *angle_shape)``."""
    check_point(tree, point, ranges=False)
    return np.stack(np.broadcast_arrays(*_components(tree, point)))


def _wrap(phi):
    phi = np.mod(phi, _TWO_PI)
    return np.where(phi >= _TWO_PI, 0.0, phi)


def _scalarize(value):
    return float(value) if np.ndim(value) == 0 else value


def chart(tree, x):
    """Inverse of :func:`embed`: the point whose embedding is ``x/|x|``.

    ``x`` has shape ``(d,)`` or ``(d, ...)``.  On coordinate singularities the
    undetermined angles come out as 0.
    """
    x = np.asarray(x, dtype=float)
    if x.shape[0] != tree.dim:
        raise TreeError(f"vector has {x.shape[0]} components, tree has dimension {tree.dim}")
    if isinstance(tree, Leaf2):
        return Leaf2Point(_scalarize(_wrap(np.arctan2(x[1], x[0]))))
    if isinstance(tree, Leaf3):
        theta = np.arctan2(np.hypot(x[1], x[2]), x[0])
        return Leaf3Point(_scalarize(theta), _scalarize(_wrap(np.arctan2(x[2], x[1]))))
    if isinstance(tree, Split):
        k = tree.left.dim
        r_left = np.linalg.norm(x[:k], axis=0)
        r_right = np.linalg.norm(x[k:], axis=0)
        theta = np.arctan2(r_right, r_left)
        left = chart(tree.left, x[:k] / np.where(r_left > 0, r_left, 1.0))
        right = chart(tree.right, x[k:] / np.where(r_right > 0, r_right, 1.0))
        return SplitPoint(_scalarize(theta), left, right)
    rest = np.linalg.norm(x[1:], axis=0)
    theta = np.arctan2(rest, x[0])
    child = chart(tree.child, x[1:] / np.where(rest > 0, rest, 1.0))
    return AxisPoint(_scalarize(theta), child)


def chart_singularity(tree, point, guard=1e-6, path="root"):
    """Path of the first node whose angle is within ``guard`` of a chart singularity, else None."""
    if isinstance(tree, Leaf2):
        return None
    s = np.abs(np.sin(point.theta))
    if isinstance(tree, Leaf3):
        return path if np.any(s < guard) else None
    if isinstance(tree, Split):
        if np.any(s < guard) or np.any(np.abs(np.cos(point.theta)) < guard):
            return path
        return chart_singularity(tree.left, point.left, guard, path + ".left") or chart_singularity(
            tree.right, point.right, guard, path + ".right"
        )
    if np.any(s < guard):
        return path
    return chart_singularity(tree.child, point.child, guard, path + ".child")


@functools.lru_cache(maxsize=None)
def _enumerate(tree, J):
    if isinstance(tree, Leaf2):
        return (Leaf2Index(0),) if J == 0 else (Leaf2Index(-J), Leaf2Index(J))
    if isinstance(tree, Leaf3):
        return tuple(Leaf3Index(J, m) for m in range(-J, J + 1))
    if isinstance(tree, Split):
        out = []
        for jl in range(J + 1):
            for jr in range(J - jl + 1):
                if (J - jl - jr) % 2:
                    continue
                for li in _enumerate(tree.left, jl):
                    for ri in _enumerate(tree.right, jr):
                        out.append(SplitIndex(J, li, ri))
        return tuple(out)
    return tuple(AxisIndex(J, ci) for jc in range(J + 1) for ci in _enumerate(tree.child, jc))


def _check_rank(J):
    J = operator.index(J)
    if J < 0:
        raise ValueError(f"rank must be non-negative, got {J}")
    if J > RANK_CAP:
        raise ValueError(f"rank {J} exceeds the cap {RANK_CAP}")
    return J


def enumerate_indices(tree, J):
    """All indices of rank J with nonzero harmonics, in deterministic order."""
    check_tree(tree)
    return list(_enumerate(tree, _check_rank(J)))


@functools.lru_cache(maxsize=None)
def _count(tree, J):
    if isinstance(tree, Leaf2):
        return 1 if J == 0 else 2
    if isinstance(tree, Leaf3):
        return 2 * J + 1
    if isinstance(tree, Split):
        return sum(
            _count(tree.left, jl) * _count(tree.right, jr)
            for jl in range(J + 1)
            for jr in range(J - jl + 1)
            if (J - jl - jr) % 2 == 0
        )
    return sum(_count(tree.child, jc) for jc in range(J + 1))


def degeneracy(tree, J):
    """Number of rank-J harmonics of the tree (counted without materializing them)."""
    check_tree(tree)
    return _count(tree, _check_rank(J))


def _evaluate(tree, index, point):
    if isinstance(tree, Leaf2):
        return np.exp(1j * index.m * np.asarray(point.phi)) * _INV_SQRT_2PI
    if isinstance(tree, Leaf3):
        polar = y_axis(AxisSignature(3, index.l, abs(index.m)), point.theta)
        return polar * np.exp(1j * index.m * np.asarray(point.phi)) * _INV_SQRT_2PI
    if isinstance(tree, Split):
        sig = SplitSignature(tree.dim, tree.left.dim, index.J, index.left.rank, index.right.rank)
        if sig.lam is None:
            return 0j
        weight = y_split(sig, point.theta)
        return weight * _evaluate(tree.left, index.left, point.left) * _evaluate(tree.right, index.right, point.right)
    if index.J < index.child.rank:
        return 0j
    weight = y_axis(AxisSignature(tree.dim, index.J, index.child.rank), point.theta)
    return weight * _evaluate(tree.child, index.child, point.child)


def evaluate(tree, index, point):
    """Value of the orthonormal harmonic ``index`` at ``point``.

    Returns a complex scalar for scalar angles, otherwise a complex array of
    the broadcast angle shape.  Indices violating a Jacobi/Gegenbauer selection
    rule give exactly zero.
    """
    check_index(tree, index)
    check_point(tree, point, ranges=False)
    value = _evaluate(tree, index, point)
    if np.ndim(value) == 0:
        return complex(value)
    return np.asarray(value, dtype=complex)


class TreeBasis:
    """The orthonormal harmonics of one tree, in the interface the verifiers use."""

    def __init__(self, tree):
        self.tree = check_tree(tree)
        self.name = "tree"

    @property
    def dim(self):
        return self.tree.dim

    def indices(self, J):
        return enumerate_indices(self.tree, J)

    def evaluate(self, index, point):
        return evaluate(self.tree, index, point)

    def norm(self, index):
        return 1.0

    def rank(self, index):
        return index.rank


def random_point(tree, rng):
    """A point drawn uniformly from the sphere."""
    x = rng.standard_normal(tree.dim)
    return chart(tree, x / np.linalg.norm(x))


def random_index(tree, J, rng):
    indices = enumerate_indices(tree, J)
    return indices[int(rng.integers(len(indices)))]
