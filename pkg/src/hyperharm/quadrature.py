"""Tensor-product quadrature for the surface measure of a parametrization tree.

The grid is stored as an open mesh: every angle of the tree gets its own
numpy axis, so evaluating a harmonic on ``grid.point`` broadcasts to the full
grid without materializing one HyperPoint per node.  Axes are numbered
depth-first (node angle before its children, left before right).
"""
import math
from dataclasses import dataclass
from typing import Any

import numpy as np

from .special import sphere_area
from .trees import (
    Axis,
    AxisPoint,
    Leaf2,
    Leaf2Point,
    Leaf3,
    Leaf3Point,
    Split,
    SplitPoint,
    check_tree,
)


def _gauss(n, lo, hi):
    x, w = np.polynomial.legendre.leggauss(n)
    half = 0.5 * (hi - lo)
    return lo + half * (x + 1.0), half * w


def _azimuth(n):
    return 2.0 * math.pi * np.arange(n) / n, np.full(n, 2.0 * math.pi / n)


@dataclass(frozen=True)
class QuadratureGrid:
    """Nodes and weights of a tensor grid on S^{d-1}.

    ``point`` is a HyperPoint whose angles are open-mesh arrays, ``weights``
    has the full grid shape, and ``axes`` names each mesh axis by node path
    and angle (``("root.left", "phi")``).  ``orders`` maps the same names to
    the number of 1D nodes used.
    """

    tree: Any
    point: Any
    weights: np.ndarray
    axes: tuple
    orders: dict

    @property
    def shape(self):
        return self.weights.shape

    @property
    def size(self):
        return self.weights.size

    @property
    def mass(self):
        return float(np.sum(self.weights))

    def nodes(self):
        """Yield ``(HyperPoint, weight)`` node by node with scalar angles, in C order."""
        for pos in np.ndindex(self.shape):
            yield _take(self.point, pos), float(self.weights[pos])

    def blocks(self, max_nodes=200_000):
        """Yield ``(point, weights)`` sub-grids obtained by cutting the first mesh axis."""
        n0 = self.shape[0]
        per_row = max(1, self.size // n0)
        step = max(1, max_nodes // per_row)
        for start in range(0, n0, step):
            sl = slice(start, min(n0, start + step))
            yield _slice_first(self.point, sl), self.weights[sl]


def _take(point, pos):
    def value(arr):
        arr = np.asarray(arr)
        idx = tuple(p if n > 1 else 0 for p, n in zip(pos, arr.shape))
        return float(arr[idx])

    return _map_angles(point, value)


def _slice_first(point, sl):
    def cut(arr):
        return arr[sl] if arr.shape[0] > 1 else arr

    return _map_angles(point, cut)


def _map_angles(point, fn):
    if isinstance(point, Leaf2Point):
        return Leaf2Point(fn(point.phi))
    if isinstance(point, Leaf3Point):
        return Leaf3Point(fn(point.theta), fn(point.phi))
    if isinstance(point, SplitPoint):
        return SplitPoint(fn(point.theta), _map_angles(point.left, fn), _map_angles(point.right, fn))
    return AxisPoint(fn(point.theta), _map_angles(point.child, fn))


def _count_axes(tree):
    if isinstance(tree, Leaf2):
        return 1
    if isinstance(tree, Leaf3):
        return 2
    if isinstance(tree, Split):
        return 1 + _count_axes(tree.left) + _count_axes(tree.right)
    return 1 + _count_axes(tree.child)


def _leaf_orders(order, jmax):
    # with jmax the leaf rules are the smallest ones exact for products of two rank-jmax factors
    if jmax is None:
        return order, 2 * order
    return jmax + 1, 2 * jmax + 1


def build_grid(tree, order, jmax=None):
    """Tensor grid for ``tree`` with ``order`` Gauss-Legendre nodes per hyperangle.

    Split angles use [0, pi/2] with the weight cos^{kappa-1} sin^{d-kappa-1},
    axis angles [0, pi] with sin^{D-2}, Leaf3 polar angles Gauss-Legendre in
    cos(theta), and azimuths a uniform rule.  Leaf rules have ``order`` polar
    and ``2*order`` azimuthal nodes, or, when ``jmax`` is given, the minimal
    sizes that integrate products of two harmonics of rank <= jmax exactly.
    """
    check_tree(tree)
    order = int(order)
    if order < 1:
        raise ValueError(f"quadrature order must be >= 1, got {order}")
    if jmax is not None and int(jmax) < 0:
        raise ValueError(f"jmax must be non-negative, got {jmax}")
    polar_n, azimuth_n = _leaf_orders(order, None if jmax is None else int(jmax))
    naxes = _count_axes(tree)
    axes, orders, factors = [], {}, []

    def place(values):
        k = len(factors)
        shape = [1] * naxes
        shape[k] = values.size
        return values.reshape(shape)

    def add(path, name, nodes, weights):
        axes.append((path, name))
        orders[f"{path}.{name}"] = nodes.size
        coord = place(nodes)
        factors.append(place(weights))
        return coord

    def build(node, path):
        if isinstance(node, Leaf2):
            return Leaf2Point(add(path, "phi", *_azimuth(azimuth_n)))
        if isinstance(node, Leaf3):
            x, w = np.polynomial.legendre.leggauss(polar_n)
            theta = add(path, "theta", np.arccos(x[::-1]), w[::-1])
            return Leaf3Point(theta, add(path, "phi", *_azimuth(azimuth_n)))
        if isinstance(node, Split):
            kappa, d = node.left.dim, node.dim
            t, w = _gauss(order, 0.0, 0.5 * math.pi)
            w = w * np.cos(t) ** (kappa - 1) * np.sin(t) ** (d - kappa - 1)
            theta = add(path, "theta", t, w)
            left = build(node.left, path + ".left")
            return SplitPoint(theta, left, build(node.right, path + ".right"))
        t, w = _gauss(order, 0.0, math.pi)
        theta = add(path, "theta", t, w * np.sin(t) ** (node.dim - 2))
        return AxisPoint(theta, build(node.child, path + ".child"))

    point = build(tree, "root")
    weights = factors[0]
    for f in factors[1:]:
        weights = weights * f
    return QuadratureGrid(tree, point, np.ascontiguousarray(weights), tuple(axes), orders)


def grid_mass_error(grid):
    """Relative deviation of the grid mass from the sphere area."""
    area = sphere_area(grid.tree.dim)
    return abs(grid.mass - area) / area
