"""Expansion coefficients and one-dimensional weight functions.

Split nodes (a d-vector cut into kappa- and (d-kappa)-dimensional parts) use
Jacobi weight functions in the hyperangle; axis nodes (one Cartesian
component against the rest) use Gegenbauer weight functions.  The ``h_*``
and ``g_*`` functions are the unnormalized functions produced by expanding
``(a . r)^J`` for a zero-length vector ``a``; ``y_split``/``y_axis`` are the
orthonormal ones used to build harmonics.
"""
import math
import operator
from dataclasses import dataclass

import numpy as np

from .special import cos_sin, gegenbauer, jacobi, log_factorial, log_gamma

_LOG2 = math.log(2.0)
_LOG_PI = math.log(math.pi)


@dataclass(frozen=True)
class SplitSignature:
    """Quantum numbers of a split node.

    ``d`` is the total dimension, ``kappa`` the dimension of the left part,
    ``J`` the node rank and ``l``/``lp`` the left/right ranks.
    """

    d: int
    kappa: int
    J: int
    l: int
    lp: int

    def __post_init__(self):
        for name in ("d", "kappa", "J", "l", "lp"):
            operator.index(getattr(self, name))
        if self.d < 4:
            raise ValueError(f"split needs d >= 4, got {self.d}")
        if not 2 <= self.kappa <= self.d - 2:
            raise ValueError(f"split needs 2 <= kappa <= d-2, got kappa={self.kappa}, d={self.d}")
        if min(self.J, self.l, self.lp) < 0:
            raise ValueError("ranks must be non-negative")

    @property
    def lam(self):
        """Jacobi degree (J - l - lp)/2, or None when it is not a non-negative integer."""
        excess = self.J - self.l - self.lp
        if excess < 0 or excess % 2:
            return None
        return excess // 2


@dataclass(frozen=True)
class AxisSignature:
    """Quantum numbers of an axis node: total dimension D, rank J, child rank l."""

    D: int
    J: int
    l: int

    def __post_init__(self):
        for name in ("D", "J", "l"):
            operator.index(getattr(self, name))
        if self.D < 3:
            raise ValueError(f"axis node needs D >= 3, got {self.D}")
        if not 0 <= self.l <= self.J:
            raise ValueError(f"axis node needs 0 <= l <= J, got l={self.l}, J={self.J}")


def _pole_factor(l, kappa):
    # (l + kappa/2 - 1) * Gamma(kappa/2 - 1); finite limit Gamma(kappa/2) at l = 0
    if l == 0:
        return math.exp(log_gamma(0.5 * kappa))
    if kappa == 2:
        raise ValueError("coefficient has a pole for a 2-dimensional factor of nonzero rank")
    a = 0.5 * kappa - 1.0
    return (l + a) * math.gamma(a)


def _zeros_like(theta):
    if np.ndim(theta) == 0:
        return 0j
    return np.zeros(np.shape(theta), dtype=complex)


def _complex_result(value, theta):
    if np.ndim(theta) == 0:
        return complex(value)
    return np.asarray(value, dtype=complex)


def _real_result(value, theta):
    if np.ndim(theta) == 0:
        return float(value)
    return np.asarray(value, dtype=float)


def b_coefficient(kappa, q, l):
    """B^(kappa)_{ql}: weight of C^{kappa/2-1}_l in the expansion of x^q."""
    kappa, q, l = operator.index(kappa), operator.index(q), operator.index(l)
    if kappa < 2:
        raise ValueError(f"kappa must be >= 2, got {kappa}")
    if not 0 <= l <= q:
        raise ValueError(f"need 0 <= l <= q, got l={l}, q={q}")
    if (q - l) % 2:
        return 0.0
    n = (q - l) // 2
    log_mag = (
        log_factorial(q)
        + log_gamma(n + 0.5)
        - 0.5 * _LOG_PI
        - l * _LOG2
        - log_factorial(q - l)
        - log_gamma(l + 0.5 * kappa + n)
    )
    return _pole_factor(l, kappa) * math.exp(log_mag)


def h_direct(sig, theta):
    """Split weight function as the binomial sum over q of B-coefficient products."""
    if sig.lam is None:
        return _zeros_like(theta)
    c, s = cos_sin(theta)
    d, kappa, J, l, lp = sig.d, sig.kappa, sig.J, sig.l, sig.lp
    total = _zeros_like(theta)
    for q in range(l, J - lp + 1, 2):
        coeff = math.comb(J, q) * b_coefficient(kappa, q, l) * b_coefficient(d - kappa, J - q, lp)
        total = total + coeff * (1j ** (J - q)) * c**q * s ** (J - q)
    return _complex_result(total, theta)


def h_constant(sig):
    """Constant in front of the Jacobi form of h (includes the J! of the q-sum)."""
    lam = sig.lam
    if lam is None:
        raise ValueError("h constant needs an integer Jacobi degree")
    d, kappa, J, l, lp = sig.d, sig.kappa, sig.J, sig.l, sig.lp
    mag = _pole_factor(l, kappa) * _pole_factor(lp, d - kappa) * math.exp(
        log_factorial(J)
        - J * _LOG2
        - log_gamma(lam + lp + 0.5 * (d - kappa))
        - log_gamma(lam + l + 0.5 * kappa)
    )
    return (1j**lp) * mag


def h_closed(sig, theta):
    """Split weight function in closed Jacobi-polynomial form."""
    lam = sig.lam
    if lam is None:
        return _zeros_like(theta)
    c, s = cos_sin(theta)
    d, kappa, l, lp = sig.d, sig.kappa, sig.l, sig.lp
    poly = jacobi(lam, lp - 1 + 0.5 * (d - kappa), l - 1 + 0.5 * kappa, np.cos(2.0 * np.asarray(theta)))
    return _complex_result(h_constant(sig) * c**l * s**lp * poly, theta)


def _check_axis_args(D, J, l):
    D, J, l = operator.index(D), operator.index(J), operator.index(l)
    if D < 3:
        raise ValueError(f"axis functions need D >= 3, got {D}")
    if not 0 <= l <= J:
        raise ValueError(f"need 0 <= l <= J, got l={l}, J={J}")
    return D, J, l


def g_direct(D, J, l, theta):
    """Axis weight function as the finite sum over n (D is the total dimension)."""
    D, J, l = _check_axis_args(D, J, l)
    c, s = cos_sin(theta)
    total = _zeros_like(theta)
    for n in range((J - l) // 2 + 1):
        k = J - l - 2 * n
        denom = math.exp(log_factorial(n) + log_factorial(k) + log_gamma(l + n + 0.5 * (D - 1)))
        total = total + ((-1) ** n / denom) * s ** (l + 2 * n) * (2.0 * c) ** k
    pref = (1j**l) * math.exp(log_factorial(J) - J * _LOG2) * _pole_factor(l, D - 1)
    return _complex_result(pref * total, theta)


def g_constant(D, J, l):
    """Constant of the Gegenbauer form of g, derived from the theta = 0 limit."""
    D, J, l = _check_axis_args(D, J, l)
    mag = _pole_factor(l, D - 1) * math.exp(
        (l + D - 3) * _LOG2
        + log_factorial(J)
        + log_gamma(l + 0.5 * (D - 2))
        - 0.5 * _LOG_PI
        - log_gamma(J + l + D - 2)
    )
    return (1j**l) * mag


def g_closed(D, J, l, theta):
    """Axis weight function as sin^l(theta) C^{l+(D-2)/2}_{J-l}(cos theta) times a constant."""
    D, J, l = _check_axis_args(D, J, l)
    c, s = cos_sin(theta)
    poly = gegenbauer(J - l, l + 0.5 * (D - 2), c)
    return _complex_result(g_constant(D, J, l) * s**l * poly, theta)


def norm_split(sig):
    """Normalization making y_split orthonormal under cos^{kappa-1} sin^{d-kappa-1} dtheta."""
    lam = sig.lam
    if lam is None:
        raise ValueError(f"no normalization: (J - l - lp)/2 is not a non-negative integer for {sig}")
    d, kappa, J, l, lp = sig.d, sig.kappa, sig.J, sig.l, sig.lp
    log_sq = (
        math.log(2 * J - 2 + d)
        + log_factorial(lam)
        + log_gamma(lam + l + lp + 0.5 * d - 1)
        - log_gamma(lam + lp + 0.5 * (d - kappa))
        - log_gamma(lam + l + 0.5 * kappa)
    )
    return math.exp(0.5 * log_sq)


def y_split(sig, theta):
    """Orthonormal split weight function; exactly zero when the Jacobi degree is not integral."""
    lam = sig.lam
    if lam is None:
        return _real_result(np.zeros(np.shape(theta)), theta)
    c, s = cos_sin(theta)
    d, kappa, l, lp = sig.d, sig.kappa, sig.l, sig.lp
    poly = jacobi(lam, lp - 1 + 0.5 * (d - kappa), l - 1 + 0.5 * kappa, np.cos(2.0 * np.asarray(theta)))
    return _real_result(norm_split(sig) * c**l * s**lp * poly, theta)


def norm_axis(sig):
    """Normalization making y_axis orthonormal under sin^{D-2}(theta) dtheta on [0, pi]."""
    D, J, l = sig.D, sig.J, sig.l
    nu = l + 0.5 * (D - 2)
    log_sq = (
        (2 * nu - 1) * _LOG2
        + math.log(J + 0.5 * (D - 2))
        + log_factorial(J - l)
        - _LOG_PI
        - log_gamma(J + l + D - 2)
    )
    return math.exp(log_gamma(nu) + 0.5 * log_sq)


def y_axis(sig, theta):
    """Orthonormal axis weight function N sin^l C^{l+(D-2)/2}_{J-l}(cos theta)."""
    c, s = cos_sin(theta)
    poly = gegenbauer(sig.J - sig.l, sig.l + 0.5 * (sig.D - 2), c)
    return _real_result(norm_axis(sig) * s**sig.l * poly, theta)
