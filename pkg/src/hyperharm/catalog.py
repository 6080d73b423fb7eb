"""Closed-form harmonics for named low-dimensional parametrizations.

Each function is written directly from its product formula, independent of
the recursive evaluator in :mod:`hyperharm.trees`, so the two can be checked
against each other.  Angles may be scalars or broadcastable numpy arrays.

Negative magnetic indices are handled by reflecting the matching azimuth
(``phi -> -phi``), which for the 3D functions is complex conjugation.  The
3D functions differ from the Condon-Shortley spherical harmonics by
``(-1)^m`` for m > 0 and coincide with them for m <= 0.
"""
import math
import operator
from dataclasses import dataclass
from typing import Any, Callable

import numpy as np

from .special import cos_sin, gegenbauer, jacobi, log_double_factorial, log_factorial
from .trees import (
    Axis,
    AxisIndex,
    Leaf2,
    Leaf2Index,
    Leaf3,
    Leaf3Index,
    Split,
    SplitIndex,
)

_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)
_LOG2 = math.log(2.0)
_LOG_PI = math.log(math.pi)


def _zero(*angles):
    shape = np.broadcast(*[np.asarray(a) for a in angles]).shape
    return 0j if shape == () else np.zeros(shape, dtype=complex)


def _out(value):
    return complex(value) if np.ndim(value) == 0 else value


def _cos2(angle):
    return np.cos(2.0 * np.asarray(angle, dtype=float))


def _jacobi_degree(excess):
    if excess < 0 or excess % 2:
        return None
    return excess // 2


def circular2(m, phi):
    """Unit-normalized circular harmonic e^{i m phi} / sqrt(2 pi)."""
    m = operator.index(m)
    return _out(np.exp(1j * m * np.asarray(phi, dtype=float)) * _INV_SQRT_2PI)


def spherical3(J, m, theta, phi):
    """3D harmonic (2m-1)!! sqrt((2J+1)/(4pi) (J-m)!/(J+m)!) e^{im phi} sin^m C^{m+1/2}_{J-m}(cos theta)."""
    J, m = operator.index(J), operator.index(m)
    if J < 0 or abs(m) > J:
        raise ValueError(f"spherical3 needs |m| <= J, got J={J}, m={m}")
    if m < 0:
        return _out(np.conj(spherical3(J, -m, theta, phi)))
    c, s = cos_sin(theta)
    log_pref = log_double_factorial(2 * m - 1) + 0.5 * (
        math.log((2 * J + 1) / (4.0 * math.pi)) + log_factorial(J - m) - log_factorial(J + m)
    )
    value = math.exp(log_pref) * np.exp(1j * m * np.asarray(phi, dtype=float)) * s**m * gegenbauer(J - m, m + 0.5, c)
    return _out(value)


def hsh4_axis(J, l, m, omega, theta, phi):
    """4D harmonic for R = (cos omega, sin omega * r3): Gegenbauer in omega times a 3D harmonic."""
    J, l, m = operator.index(J), operator.index(l), operator.index(m)
    if not 0 <= l <= J or abs(m) > l:
        raise ValueError(f"hsh4_axis needs 0 <= l <= J and |m| <= l, got {(J, l, m)}")
    c, s = cos_sin(omega)
    log_pref = log_factorial(l) + 0.5 * (
        math.log(2.0 * (J + 1)) + log_factorial(J - l) - _LOG_PI - log_factorial(J + l + 1)
    )
    radial = math.exp(log_pref) * (2.0 * s) ** l * gegenbauer(J - l, l + 1.0, c)
    return _out(radial * spherical3(l, m, theta, phi))


def hsh4_split(J, m1, m2, beta, phi1, phi2):
    """4D harmonic for R = (cos beta * r2, sin beta * r2'), Jacobi polynomial in cos 2beta."""
    J, m1, m2 = operator.index(J), operator.index(m1), operator.index(m2)
    if J < 0:
        raise ValueError(f"rank must be non-negative, got {J}")
    if m1 < 0:
        return hsh4_split(J, -m1, m2, beta, -np.asarray(phi1, dtype=float), phi2)
    if m2 < 0:
        return hsh4_split(J, m1, -m2, beta, phi1, -np.asarray(phi2, dtype=float))
    lam = _jacobi_degree(J - m1 - m2)
    if lam is None:
        return _zero(beta, phi1, phi2)
    c, s = cos_sin(beta)
    log_sq = (
        math.log(J + 1)
        + log_factorial(lam)
        + log_factorial(lam + m1 + m2)
        - _LOG2
        - log_factorial(lam + m1)
        - log_factorial(lam + m2)
    )
    pref = math.exp(0.5 * log_sq) / math.pi
    phase = np.exp(1j * (m1 * np.asarray(phi1, dtype=float) + m2 * np.asarray(phi2, dtype=float)))
    return _out(pref * phase * c**m1 * s**m2 * jacobi(lam, m2, m1, _cos2(beta)))


def _half_integer(value, name):
    twice = 2 * value
    rounded = round(twice)
    if abs(twice - rounded) > 1e-12:
        raise ValueError(f"{name} must be an integer or half-integer, got {value}")
    return int(rounded)


def _half_angle_matrix(c, s):
    # rows m' = -1/2, +1/2; columns m = -1/2, +1/2
    return [[c, s], [-s, c]]


def wigner_d_matrix(two_j, angle):
    """All d^j_{m'm}(angle) for j = two_j/2, as ``out[i', i]`` with m = -j + i.

    Built by coupling spin j - 1/2 with spin 1/2, starting from the j = 1/2
    matrix; no closed-form sum is used.
    """
    two_j = operator.index(two_j)
    if two_j < 0:
        raise ValueError(f"two_j must be non-negative, got {two_j}")
    b = np.asarray(angle, dtype=float)
    if two_j == 0:
        return np.ones((1, 1) + b.shape)
    c, s = np.cos(0.5 * b), np.sin(0.5 * b)
    half = _half_angle_matrix(c, s)
    prev = np.array(half) if b.ndim == 0 else np.stack([np.stack(row) for row in half])
    for tj in range(2, two_j + 1):
        size = tj + 1
        cur = np.zeros((size, size) + b.shape)
        for ip in range(size):
            tmp = -tj + 2 * ip  # 2 m'
            for i in range(size):
                tm = -tj + 2 * i  # 2 m
                acc = 0.0
                for sp in (0, 1):
                    tsp = 2 * sp - 1  # 2 sigma'
                    cp = math.sqrt((tj + tsp * tmp) / (2.0 * tj))
                    jp = (tmp - tsp + tj - 1) // 2
                    if cp == 0.0 or not 0 <= jp < tj:
                        continue
                    for sg in (0, 1):
                        tsg = 2 * sg - 1
                        cm = math.sqrt((tj + tsg * tm) / (2.0 * tj))
                        jm = (tm - tsg + tj - 1) // 2
                        if cm == 0.0 or not 0 <= jm < tj:
                            continue
                        acc = acc + cp * cm * prev[jp, jm] * half[sp][sg]
                cur[ip, i] = acc
        prev = cur
    return prev


def wigner_d(two_j, two_mp, two_m, angle):
    """Single element d^j_{m'm}(angle), all arguments given as twice their value."""
    two_j, two_mp, two_m = operator.index(two_j), operator.index(two_mp), operator.index(two_m)
    if abs(two_mp) > two_j or abs(two_m) > two_j or (two_j - two_mp) % 2 or (two_j - two_m) % 2:
        raise ValueError(f"invalid Wigner indices 2j={two_j}, 2m'={two_mp}, 2m={two_m}")
    mat = wigner_d_matrix(two_j, angle)
    value = mat[(two_mp + two_j) // 2, (two_m + two_j) // 2]
    return float(value) if np.ndim(value) == 0 else value


def wigner4(j, mu, nu, phi1, beta, phi2):
    """4D harmonic as a rotation matrix element: e^{i(mu+nu)phi1} d^j_{mu nu}(2 beta) e^{i(mu-nu)phi2}."""
    two_j, two_mu, two_nu = _half_integer(j, "j"), _half_integer(mu, "mu"), _half_integer(nu, "nu")
    if two_j < 0 or abs(two_mu) > two_j or abs(two_nu) > two_j:
        raise ValueError(f"wigner4 needs |mu|, |nu| <= j, got j={j}, mu={mu}, nu={nu}")
    if (two_j - two_mu) % 2 or (two_j - two_nu) % 2:
        raise ValueError(f"mu and nu must differ from j by integers, got j={j}, mu={mu}, nu={nu}")
    d = wigner_d(two_j, two_mu, two_nu, 2.0 * np.asarray(beta, dtype=float))
    k1, k2 = (two_mu + two_nu) // 2, (two_mu - two_nu) // 2
    phase = np.exp(1j * (k1 * np.asarray(phi1, dtype=float) + k2 * np.asarray(phi2, dtype=float)))
    return _out(phase * d)


def wigner_index_map(J, m1, m2):
    """(j, mu, nu) paired with the 4D split index (J, m1, m2)."""
    return J / 2, -(m1 + m2) / 2, (m2 - m1) / 2


def hsh5(J, mu, l, m, alpha, beta, theta, phi):
    """5D harmonic for R = (cos beta * r2(alpha), sin beta * r3(theta, phi))."""
    J, mu, l, m = (operator.index(v) for v in (J, mu, l, m))
    if l < 0 or abs(m) > l:
        raise ValueError(f"hsh5 needs 0 <= |m| <= l, got l={l}, m={m}")
    if mu < 0:
        return hsh5(J, -mu, l, m, -np.asarray(alpha, dtype=float), beta, theta, phi)
    lam = _jacobi_degree(J - l - mu)
    if lam is None:
        return _zero(alpha, beta, theta, phi)
    c, s = cos_sin(beta)
    log_sq = (
        math.log(2 * J + 3)
        + log_factorial(lam)
        + log_double_factorial(J + l + mu + 1)
        - _LOG_PI
        - (mu + 1) * _LOG2
        - log_factorial(lam + mu)
        - log_double_factorial(J + l - mu + 1)
    )
    radial = math.exp(0.5 * log_sq) * c**mu * s**l * jacobi(lam, l + 0.5, mu, _cos2(beta))
    phase = np.exp(1j * mu * np.asarray(alpha, dtype=float))
    return _out(radial * phase * spherical3(l, m, theta, phi))


def hsh6_two3(J, l1, m1, l2, m2, alpha, r1hat, r2hat):
    """6D harmonic for R = (cos alpha * r1, sin alpha * r2), r1hat/r2hat = (theta, phi)."""
    J, l1, m1, l2, m2 = (operator.index(v) for v in (J, l1, m1, l2, m2))
    if l1 < 0 or l2 < 0 or abs(m1) > l1 or abs(m2) > l2:
        raise ValueError(f"hsh6_two3 needs |m_i| <= l_i, got {(l1, m1, l2, m2)}")
    lam = _jacobi_degree(J - l1 - l2)
    if lam is None:
        return _zero(alpha, *r1hat, *r2hat)
    c, s = cos_sin(alpha)
    log_sq = (
        (J + 3) * _LOG2
        + math.log(J + 2)
        + log_factorial(lam)
        + log_factorial(lam + l1 + l2 + 1)
        - _LOG_PI
        - log_double_factorial(J + l1 - l2 + 1)
        - log_double_factorial(J - l1 + l2 + 1)
    )
    radial = math.exp(0.5 * log_sq) * c**l1 * s**l2 * jacobi(lam, l2 + 0.5, l1 + 0.5, _cos2(alpha))
    return _out(radial * spherical3(l1, m1, *r1hat) * spherical3(l2, m2, *r2hat))


def hsh6_three2(J, l, m1, m2, m3, theta, beta, phi1, phi2, phi3):
    """6D harmonic for R = (r1, R4): a 2D factor, a Jacobi weight, and a 4D split harmonic of rank l."""
    J, l, m1, m2, m3 = (operator.index(v) for v in (J, l, m1, m2, m3))
    if l < 0:
        raise ValueError(f"inner rank must be non-negative, got {l}")
    if m1 < 0:
        return hsh6_three2(J, l, -m1, m2, m3, theta, beta, -np.asarray(phi1, dtype=float), phi2, phi3)
    lam = _jacobi_degree(J - m1 - l)
    if lam is None or _jacobi_degree(l - abs(m2) - abs(m3)) is None:
        return _zero(theta, beta, phi1, phi2, phi3)
    c, s = cos_sin(theta)
    log_sq = (
        math.log(J + 2)
        + log_factorial(lam)
        + log_factorial(lam + m1 + l + 1)
        - _LOG_PI
        - log_factorial(lam + m1)
        - log_factorial(lam + l + 1)
    )
    radial = math.exp(0.5 * log_sq) * c**m1 * s**l * jacobi(lam, l + 1.0, m1, _cos2(theta))
    phase = np.exp(1j * m1 * np.asarray(phi1, dtype=float))
    return _out(radial * phase * hsh4_split(l, m2, m3, beta, phi2, phi3))


# -- families: enumeration, point adapters, tree correspondences ---------------------------


def _split_pairs(J, first, second):
    """(a, b, ia, ib) with a of rank ra, b of rank rb and J - ra - rb even and >= 0."""
    for ra in range(J + 1):
        for rb in range(J - ra + 1):
            if (J - ra - rb) % 2 == 0:
                for a in first(ra):
                    for b in second(rb):
                        yield a, b


def _ms2(r):
    return [0] if r == 0 else [-r, r]


def _ms3(r):
    return [(r, m) for m in range(-r, r + 1)]


def _idx_circular2(J):
    return [(m,) for m in _ms2(J)]


def _idx_spherical3(J):
    return [(J, m) for m in range(-J, J + 1)]


def _idx_hsh4_axis(J):
    return [(J, l, m) for l in range(J + 1) for m in range(-l, l + 1)]


def _idx_hsh4_split(J):
    return [(J, a, b) for a, b in _split_pairs(J, _ms2, _ms2)]


def _idx_wigner4(J):
    return [(J, tmu, tnu) for tmu in range(-J, J + 1, 2) for tnu in range(-J, J + 1, 2)]


def _idx_hsh5(J):
    return [(J, a, l, m) for a, (l, m) in _split_pairs(J, _ms2, _ms3)]


def _idx_hsh6_two3(J):
    return [(J, l1, m1, l2, m2) for (l1, m1), (l2, m2) in _split_pairs(J, _ms3, _ms3)]


def _idx_hsh6_three2(J):
    def inner(r):
        return [(r, m2, m3) for m2, m3 in _split_pairs(r, _ms2, _ms2)]

    return [(J, l, m1, m2, m3) for m1, (l, m2, m3) in _split_pairs(J, _ms2, inner)]


@dataclass(frozen=True)
class CatalogFamily:
    """A named closed-form family together with its parametrization tree.

    Indices are integer tuples named by ``fields``; wigner4 stores twice its
    spin labels so they stay integral.  ``evaluate`` takes a point of ``tree`` and maps its angles onto the
    family's arguments.  ``norm`` is the expected squared norm under the
    hyperspherical surface measure.
    """

    name: str
    fields: tuple
    tree: Any
    _indices: Callable
    _evaluate: Callable
    _tree_index: Callable
    _rank: Callable = lambda idx: idx[0]
    _norm: Callable = lambda idx: 1.0

    @property
    def dim(self):
        return self.tree.dim

    def indices(self, J):
        return self._indices(operator.index(J))

    def evaluate(self, index, point):
        return self._evaluate(index, point)

    def norm(self, index):
        return self._norm(index)

    def rank(self, index):
        return self._rank(index)

    def tree_index(self, index):
        """Index of the recursively built harmonic spanning the same function up to a phase."""
        return self._tree_index(index)


#: Ratio of the Euler-angle measure sin(2b) d(2b) dphi1 dphi2 to the surface measure of S^3.
WIGNER_MEASURE_FACTOR = 4.0


def wigner4_norm(two_j, measure="surface"):
    """Squared norm of a wigner4 function; 8 pi^2/(2j+1) under the Euler-angle measure."""
    euler = 8.0 * math.pi**2 / (two_j + 1)
    if measure == "euler":
        return euler
    if measure == "surface":
        return euler / WIGNER_MEASURE_FACTOR
    raise ValueError(f"unknown measure {measure!r}")


_SPLIT22 = Split(Leaf2(), Leaf2())

FAMILIES = {
    "circular2": CatalogFamily(
        "circular2",
        ("m",),
        Leaf2(),
        _idx_circular2,
        lambda i, p: circular2(i[0], p.phi),
        lambda i: Leaf2Index(i[0]),
        _rank=lambda i: abs(i[0]),
    ),
    "spherical3": CatalogFamily(
        "spherical3",
        ("J", "m"),
        Leaf3(),
        _idx_spherical3,
        lambda i, p: spherical3(i[0], i[1], p.theta, p.phi),
        lambda i: Leaf3Index(i[0], i[1]),
    ),
    "hsh4_axis": CatalogFamily(
        "hsh4_axis",
        ("J", "l", "m"),
        Axis(Leaf3()),
        _idx_hsh4_axis,
        lambda i, p: hsh4_axis(*i, p.theta, p.child.theta, p.child.phi),
        lambda i: AxisIndex(i[0], Leaf3Index(i[1], i[2])),
    ),
    "hsh4_split": CatalogFamily(
        "hsh4_split",
        ("J", "m1", "m2"),
        _SPLIT22,
        _idx_hsh4_split,
        lambda i, p: hsh4_split(*i, p.theta, p.left.phi, p.right.phi),
        lambda i: SplitIndex(i[0], Leaf2Index(i[1]), Leaf2Index(i[2])),
    ),
    "wigner4": CatalogFamily(
        "wigner4",
        ("two_j", "two_mu", "two_nu"),
        _SPLIT22,
        _idx_wigner4,
        lambda i, p: wigner4(i[0] / 2, i[1] / 2, i[2] / 2, p.left.phi, p.theta, p.right.phi),
        lambda i: SplitIndex(i[0], Leaf2Index((i[1] + i[2]) // 2), Leaf2Index((i[1] - i[2]) // 2)),
        _norm=lambda i: wigner4_norm(i[0]),
    ),
    "hsh5": CatalogFamily(
        "hsh5",
        ("J", "mu", "l", "m"),
        Split(Leaf2(), Leaf3()),
        _idx_hsh5,
        lambda i, p: hsh5(*i, p.left.phi, p.theta, p.right.theta, p.right.phi),
        lambda i: SplitIndex(i[0], Leaf2Index(i[1]), Leaf3Index(i[2], i[3])),
    ),
    "hsh6_two3": CatalogFamily(
        "hsh6_two3",
        ("J", "l1", "m1", "l2", "m2"),
        Split(Leaf3(), Leaf3()),
        _idx_hsh6_two3,
        lambda i, p: hsh6_two3(*i, p.theta, (p.left.theta, p.left.phi), (p.right.theta, p.right.phi)),
        lambda i: SplitIndex(i[0], Leaf3Index(i[1], i[2]), Leaf3Index(i[3], i[4])),
    ),
    "hsh6_three2": CatalogFamily(
        "hsh6_three2",
        ("J", "l", "m1", "m2", "m3"),
        Split(Leaf2(), _SPLIT22),
        _idx_hsh6_three2,
        lambda i, p: hsh6_three2(
            *i, p.theta, p.right.theta, p.left.phi, p.right.left.phi, p.right.right.phi
        ),
        lambda i: SplitIndex(i[0], Leaf2Index(i[2]), SplitIndex(i[1], Leaf2Index(i[3]), Leaf2Index(i[4]))),
    ),
}

#: One representative tree per dimension 2..6.
CATALOG_TREES = {
    2: Leaf2(),
    3: Leaf3(),
    4: Axis(Leaf3()),
    5: Split(Leaf2(), Leaf3()),
    6: Split(Leaf3(), Leaf3()),
}


def family(name):
    try:
        return FAMILIES[name]
    except KeyError:
        raise ValueError(f"unknown catalog family {name!r}; choose from {sorted(FAMILIES)}") from None
