"""Hyperspherical harmonics on arbitrary parametrization trees, with numerical verification."""
from .catalog import FAMILIES, family
from .quadrature import QuadratureGrid, build_grid
from .trees import (
    Axis,
    AxisIndex,
    AxisPoint,
    ChartSingularityError,
    Leaf2,
    Leaf2Index,
    Leaf2Point,
    Leaf3,
    Leaf3Index,
    Leaf3Point,
    Split,
    SplitIndex,
    SplitPoint,
    TreeBasis,
    TreeError,
    chart,
    degeneracy,
    embed,
    enumerate_indices,
    evaluate,
    random_index,
    random_point,
    validate_tree,
)
from .verification import run_suite

__version__ = "0.1.0"
