"""Orthogonal polynomials and gamma-type factors.

Everything here is evaluated by three-term recurrence or in log space, and
accepts either a scalar argument or a numpy array (returning the same kind).
"""
import math
import operator

import numpy as np

#: Arguments this far outside [-1, 1] are clamped; beyond it they are errors.
ARG_TOL = 1e-12

_LOG_SQRT_PI = 0.5 * math.log(math.pi)


def _degree(degree):
    degree = operator.index(degree)
    if degree < 0:
        raise ValueError(f"polynomial degree must be non-negative, got {degree}")
    return degree


def _argument(x):
    arr = np.asarray(x, dtype=float)
    if np.any(np.abs(arr) > 1.0 + ARG_TOL):
        raise ValueError("polynomial argument outside [-1, 1]")
    return np.clip(arr, -1.0, 1.0)


def _result(arr, like):
    if np.ndim(like) == 0:
        return float(arr)
    return arr


def gegenbauer(degree, alpha, x):
    """Gegenbauer polynomial C^alpha_degree(x).

    Uses ``n C_n = 2x(n + alpha - 1) C_{n-1} - (n + 2 alpha - 2) C_{n-2}``
    seeded by ``C_0 = 1`` and ``C_1 = 2 alpha x``.
    """
    n_max = _degree(degree)
    t = _argument(x)
    prev = np.ones_like(t)
    if n_max == 0:
        return _result(prev, x)
    cur = 2.0 * alpha * t
    for n in range(2, n_max + 1):
        prev, cur = cur, (2.0 * t * (n + alpha - 1.0) * cur - (n + 2.0 * alpha - 2.0) * prev) / n
    return _result(cur, x)


def jacobi(degree, alpha, beta, x):
    """Jacobi polynomial P^(alpha, beta)_degree(x) by three-term recurrence."""
    n_max = _degree(degree)
    t = _argument(x)
    prev = np.ones_like(t)
    if n_max == 0:
        return _result(prev, x)
    ab = alpha + beta
    cur = 0.5 * (alpha - beta) + 0.5 * (ab + 2.0) * t
    for n in range(2, n_max + 1):
        s = 2.0 * n + ab
        a = 2.0 * n * (n + ab) * (s - 2.0)
        b = (s - 1.0) * (s * (s - 2.0) * t + alpha * alpha - beta * beta)
        c = 2.0 * (n + alpha - 1.0) * (n + beta - 1.0) * s
        prev, cur = cur, (b * cur - c * prev) / a
    return _result(cur, x)


def log_gamma(x):
    """Natural log of Gamma(x) for x > 0."""
    if not x > 0:
        raise ValueError(f"log_gamma requires a positive argument, got {x}")
    return math.lgamma(x)


def log_factorial(n):
    return log_gamma(operator.index(n) + 1.0)


def log_double_factorial(n):
    """log(n!!) with (-1)!! = 0!! = 1."""
    n = operator.index(n)
    if n < -1:
        raise ValueError(f"double factorial undefined for {n}")
    if n <= 0:
        return 0.0
    if n % 2 == 0:
        k = n // 2
        return k * math.log(2.0) + log_gamma(k + 1.0)
    k = (n + 1) // 2
    # (2k-1)!! = 2^k Gamma(k + 1/2) / sqrt(pi)
    return k * math.log(2.0) + log_gamma(k + 0.5) - _LOG_SQRT_PI


def double_factorial(n):
    n = operator.index(n)
    if n < -1:
        raise ValueError(f"double factorial undefined for {n}")
    if n > 150:
        return math.exp(log_double_factorial(n))
    return float(math.prod(range(n, 0, -2)))


def gamma_ratio(numerator, denominator):
    """prod Gamma(numerator) / prod Gamma(denominator), formed in log space."""
    total = sum(log_gamma(a) for a in numerator) - sum(log_gamma(b) for b in denominator)
    return math.exp(total)


def sphere_area(d):
    """Surface area of the unit sphere S^{d-1} in d dimensions."""
    return 2.0 * math.exp(0.5 * d * math.log(math.pi) - log_gamma(0.5 * d))


def cos_sin(theta):
    """cos and sin of theta, exactly zero at theta = pi/2 (cos) and pi (sin).

    Keeps ``cos(theta)**l`` an exact zero at the pole for l > 0 while
    ``0.0**0`` stays 1, matching the polynomial limit.
    """
    t = np.asarray(theta, dtype=float)
    c = np.cos(t)
    s = np.sin(t)
    c = np.where(t == 0.5 * math.pi, 0.0, c)
    s = np.where(t == math.pi, 0.0, s)
    if t.ndim == 0:
        return float(c), float(s)
    return c, s
