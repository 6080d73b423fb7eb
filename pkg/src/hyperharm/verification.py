"""Numerical checks of the defining identities of hyperspherical harmonics.

Every check accepts a *basis*: either a parametrization tree (its recursive
orthonormal harmonics) or a catalog family.  A basis provides ``tree``,
``indices(J)``, ``evaluate(index, point)``, ``norm(index)`` and
``rank(index)``.  Suite runners bundle the checks into JSON-ready reports.
"""
import math
from dataclasses import dataclass

import numpy as np

from .catalog import hsh4_split, wigner4, wigner4_norm, wigner_index_map
from .quadrature import build_grid, grid_mass_error
from .special import gegenbauer, sphere_area
from .trees import (
    Axis,
    ChartSingularityError,
    Split,
    TreeBasis,
    chart,
    chart_singularity,
    embed,
    random_point,
)


class NearZeroError(ValueError):
    """The reference value of a ratio check is too close to zero; resample."""


def as_basis(basis_or_tree):
    if hasattr(basis_or_tree, "indices") and hasattr(basis_or_tree, "evaluate"):
        return basis_or_tree
    return TreeBasis(basis_or_tree)


def basis_indices(basis, jmax):
    """All indices of rank <= jmax in enumeration order."""
    basis = as_basis(basis)
    return [idx for J in range(int(jmax) + 1) for idx in basis.indices(J)]


def _block_values(basis, indices, point, shape):
    out = np.empty((len(indices), math.prod(shape)), dtype=complex)
    for k, idx in enumerate(indices):
        out[k] = np.broadcast_to(basis.evaluate(idx, point), shape).ravel()
    return out


def _block_budget(nfuncs):
    return max(1, 8_000_000 // max(1, nfuncs))


def gram_matrix(basis_or_tree, jmax, grid, indices=None):
    """Quadrature inner products <Y_a, Y_b> over all harmonics of rank <= jmax."""
    basis = as_basis(basis_or_tree)
    if indices is None:
        indices = basis_indices(basis, jmax)
    gram = np.zeros((len(indices), len(indices)), dtype=complex)
    for point, w in grid.blocks(_block_budget(len(indices))):
        values = _block_values(basis, indices, point, w.shape)
        gram += (values.conj() * w.ravel()) @ values.T
    return gram


def normalized_gram(basis_or_tree, jmax, grid):
    """Gram matrix divided by sqrt(norm_a norm_b), plus the index list."""
    basis = as_basis(basis_or_tree)
    indices = basis_indices(basis, jmax)
    scale = np.sqrt(np.array([basis.norm(i) for i in indices], dtype=float))
    gram = gram_matrix(basis, jmax, grid, indices)
    return gram / np.outer(scale, scale), indices


def identity_deviation(gram):
    """(largest off-diagonal modulus, largest |diagonal - 1|)."""
    off = gram - np.diag(np.diag(gram))
    off_max = float(np.max(np.abs(off))) if gram.size else 0.0
    diag_max = float(np.max(np.abs(np.diag(gram) - 1.0))) if gram.size else 0.0
    return off_max, diag_max


def _fd_residual(values, h, degree, magnitude, radius, d):
    # values: F at x0, then x0 +/- h e_k interleaved as (+e_1, -e_1, +e_2, ...)
    f0 = values[0]
    plus, minus = values[1::2], values[2::2]
    second = (plus - 2.0 * f0 + minus) / h**2
    grad = np.sqrt(np.sum(np.abs((plus - minus) / (2.0 * h)) ** 2))
    # the last term keeps the scale meaningful on nodal sets of F
    overall = degree * (degree + d - 2) * magnitude * radius ** (degree - 2.0)
    scale = np.sum(np.abs(second)) + degree * grad + abs(f0) + overall
    if scale == 0.0:
        return 0.0
    return float(abs(np.sum(second)) / scale)


def _stencil(x0, h):
    d = x0.size
    cols = [x0]
    for k in range(d):
        e = np.zeros(d)
        e[k] = h
        cols += [x0 + e, x0 - e]
    return np.stack(cols, axis=1)


def _check_step(step):
    if not 1e-5 <= step <= 1e-2:
        raise ValueError(f"finite-difference step must lie in [1e-5, 1e-2], got {step}")


def laplace_residual(basis_or_tree, index, point, step=1e-3, guard=1e-6):
    """Relative central-difference Laplacian of F(x) = |x|^J Y(x/|x|) at the embedded point.

    The residual is |sum_k D_k^2 F| divided by the scale
    sum_k |D_k^2 F| + J |grad F| + |F| + J (J + d - 2) M, where M is the
    root-mean-square of Y over the sphere.
    Raises ChartSingularityError when any node angle is within ``guard`` of a
    coordinate singularity.
    """
    basis = as_basis(basis_or_tree)
    _check_step(step)
    tree = basis.tree
    path = chart_singularity(tree, point, guard)
    if path is not None:
        raise ChartSingularityError(path)
    J = basis.rank(index)
    x = _stencil(np.asarray(embed(tree, point), dtype=float), step)
    radius = np.linalg.norm(x, axis=0)
    values = radius**J * np.broadcast_to(basis.evaluate(index, chart(tree, x)), radius.shape)
    rms = math.sqrt(basis.norm(index) / sphere_area(tree.dim))
    return _fd_residual(values, step, J, rms, 1.0, tree.dim)


def null_vector_laplacian(a, J, x, step=1e-4):
    """Relative central-difference Laplacian of (a . x)^J at the Cartesian point x.

    Same scale as :func:`laplace_residual`, with M = 1, the largest value of
    |a . x|^J on the unit sphere for a = (b_left, i b_right).
    """
    _check_step(step)
    a = np.asarray(a, dtype=complex)
    x = np.asarray(x, dtype=float)
    pts = _stencil(x, step)
    return _fd_residual((a @ pts) ** J, step, J, 1.0, float(np.linalg.norm(x)), x.size)


def addition_theorem_check(basis_or_tree, J, point_a, point_b, guard=1e-4):
    """(sum over rank-J harmonics of conj(Y(A)) Y(B), sum / C^{d/2-1}_J(cos omega)).

    Raises NearZeroError when |C_J(cos omega)| < guard * C_J(1).
    """
    basis = as_basis(basis_or_tree)
    d = basis.tree.dim
    if d < 3:
        raise ValueError("the Gegenbauer addition kernel needs d >= 3")
    xa = np.asarray(embed(basis.tree, point_a), dtype=float)
    xb = np.asarray(embed(basis.tree, point_b), dtype=float)
    cos_w = float(np.clip(xa @ xb, -1.0, 1.0))
    alpha = 0.5 * d - 1.0
    kernel = gegenbauer(J, alpha, cos_w)
    if abs(kernel) < guard * gegenbauer(J, alpha, 1.0):
        raise NearZeroError(f"C_{J}(cos omega) = {kernel:.3g} is too close to zero")
    total = 0j
    for idx in basis.indices(J):
        total += np.conj(basis.evaluate(idx, point_a)) * basis.evaluate(idx, point_b) / basis.norm(idx)
    return complex(total), complex(total / kernel)


def measured_addition_constant(basis_or_tree, J, point):
    """Sum of |Y|^2 at one point over rank J, divided by C^{d/2-1}_J(1)."""
    basis = as_basis(basis_or_tree)
    total = sum(abs(basis.evaluate(i, point)) ** 2 / basis.norm(i) for i in basis.indices(J))
    return float(total / gegenbauer(J, 0.5 * basis.tree.dim - 1.0, 1.0))


def addition_constant_reference(d, J):
    """(2J + d - 2) / ((d - 2) |S^{d-1}|): value of the constant for orthonormal harmonics."""
    return (2 * J + d - 2) / ((d - 2) * sphere_area(d))


@dataclass(frozen=True)
class ZeroLengthSeed:
    """Null vector a = (b_left, i * b_right) with real unit b_left, b_right, so a . a = 0.

    ``kind`` is "split" (b_left spans the first kappa coordinates) or "axis"
    (b_left is the single coordinate 1).
    """

    b_left: tuple
    b_right: tuple
    kind: str

    @property
    def a(self):
        return np.concatenate([np.asarray(self.b_left, dtype=float), 1j * np.asarray(self.b_right, dtype=float)])

    @staticmethod
    def _unit(v):
        v = np.asarray(v, dtype=float).ravel()
        n = np.linalg.norm(v)
        if n == 0.0:
            raise ValueError("seed direction must be nonzero")
        return tuple(float(c) for c in v / n)

    @classmethod
    def split(cls, b_left, b_right):
        return cls(cls._unit(b_left), cls._unit(b_right), "split")

    @classmethod
    def axis(cls, b):
        return cls((1.0,), cls._unit(b), "axis")

    @classmethod
    def random(cls, tree, rng):
        if isinstance(tree, Split):
            return cls.split(rng.standard_normal(tree.left.dim), rng.standard_normal(tree.right.dim))
        if isinstance(tree, Axis):
            return cls.axis(rng.standard_normal(tree.dim - 1))
        raise ValueError("zero-length seeds need a split or axis root")


def _check_seed(tree, seed):
    if isinstance(tree, Split):
        if seed.kind != "split" or len(seed.b_left) != tree.left.dim or len(seed.b_right) != tree.right.dim:
            raise ValueError("seed does not match the root split of the tree")
    elif isinstance(tree, Axis):
        if seed.kind != "axis" or len(seed.b_right) != tree.dim - 1:
            raise ValueError("seed does not match the root axis of the tree")
    else:
        raise ValueError("zero-length check needs a split or axis root")


def zero_vector_check(basis_or_tree, J, seed, grid):
    """Relative L2 distance between (a . x)^J and its projection on the rank-J harmonics.

    Two passes over the grid: coefficients first, then the residual itself,
    so the result does not suffer the cancellation of |f|^2 - sum |c|^2.
    """
    basis = as_basis(basis_or_tree)
    tree = basis.tree
    _check_seed(tree, seed)
    a = seed.a
    indices = basis.indices(J)
    norms = np.array([basis.norm(i) for i in indices], dtype=float)
    budget = _block_budget(len(indices))

    def target(point):
        return np.tensordot(a, embed(tree, point), axes=1) ** J

    coeffs = np.zeros(len(indices), dtype=complex)
    f_norm = 0.0
    for point, w in grid.blocks(budget):
        f = np.broadcast_to(target(point), w.shape).ravel()
        values = _block_values(basis, indices, point, w.shape)
        wf = w.ravel() * f
        coeffs += values.conj() @ wf
        f_norm += float(np.sum(w.ravel() * np.abs(f) ** 2))
    coeffs /= norms
    residual = 0.0
    for point, w in grid.blocks(budget):
        f = np.broadcast_to(target(point), w.shape).ravel()
        values = _block_values(basis, indices, point, w.shape)
        residual += float(np.sum(w.ravel() * np.abs(f - coeffs @ values) ** 2))
    return math.sqrt(residual / f_norm)


def _two_j(j):
    twice = 2 * j
    if abs(twice - round(twice)) > 1e-12 or twice < 0:
        raise ValueError(f"j must be a non-negative half-integer, got {j}")
    return int(round(twice))


def character(j, cos_omega):
    """sin((2j+1) omega) / sin(omega), with the limits at omega = 0 and pi."""
    n = _two_j(j) + 1
    cos_omega = float(np.clip(cos_omega, -1.0, 1.0))
    omega = math.acos(cos_omega)
    s = math.sin(omega)
    if s < 1e-8:
        return float(n) if cos_omega > 0 else float((-1) ** (n - 1) * n)
    return math.sin(n * omega) / s


def rotation_cosine(angles_a, angles_b):
    """cos(omega) between two points given as (phi1, beta, phi2)."""
    p1, b, p2 = angles_a
    q1, c, q2 = angles_b
    return math.cos(b) * math.cos(c) * math.cos(p1 - q1) + math.sin(b) * math.sin(c) * math.cos(p2 - q2)


def character_check(j, angles_a, angles_b):
    """(sum over mu, nu of conj(W(A)) W(B), sin((2j+1)w)/sin w) for W = wigner4 of spin j."""
    two_j = _two_j(j)
    total = 0j
    for tmu in range(-two_j, two_j + 1, 2):
        for tnu in range(-two_j, two_j + 1, 2):
            args = (two_j / 2, tmu / 2, tnu / 2)
            total += np.conj(wigner4(*args, *angles_a)) * wigner4(*args, *angles_b)
    return complex(total), character(j, rotation_cosine(angles_a, angles_b))


def wigner_norm_euler(two_j, two_mu, two_nu, order=48):
    """Integral of |wigner4|^2 over sin(2b) d(2b) dphi1 dphi2, by its own product rule."""
    x, w = np.polynomial.legendre.leggauss(order)
    angle = 0.5 * math.pi * (x + 1.0)  # 2b in [0, pi]
    weights = 0.5 * math.pi * w * np.sin(angle)
    nphi = 2 * two_j + 2
    phi = 2.0 * math.pi * np.arange(nphi) / nphi
    vals = wigner4(two_j / 2, two_mu / 2, two_nu / 2, phi[:, None, None], 0.5 * angle[None, :, None], phi[None, None, :])
    dens = np.abs(vals) ** 2 * weights[None, :, None]
    return float(np.sum(dens) * (2.0 * math.pi / nphi) ** 2)


def wigner_map_deviation(J, m1, m2, rng, samples=20):
    """Fit hsh4_split(J, m1, m2) = c * conj(wigner4(map)) on random angles; return (c, worst misfit).

    The misfit is relative to the largest sampled |hsh4_split|.
    """
    j, mu, nu = wigner_index_map(J, m1, m2)
    beta = rng.uniform(0.0, 0.5 * math.pi, samples)
    phi1 = rng.uniform(0.0, 2.0 * math.pi, samples)
    phi2 = rng.uniform(0.0, 2.0 * math.pi, samples)
    h = np.asarray(hsh4_split(J, m1, m2, beta, phi1, phi2))
    w = np.conj(np.asarray(wigner4(j, mu, nu, phi1, beta, phi2)))
    c = complex(np.vdot(w, h) / np.vdot(w, w))
    scale = float(np.max(np.abs(h)))
    return c, float(np.max(np.abs(h - c * w)) / scale)


# -- suites --------------------------------------------------------------------------------

SUITES = ("gram", "laplace", "addition", "zerovec", "character")

TOLERANCES = {
    "grid_mass": 1e-10,
    "gram": 1e-8,
    "laplace": 1e-5,
    "addition_spread": 1e-9,
    "addition_imag": 1e-10,
    "zerovec": 1e-8,
    "null_laplacian": 1e-6,
    "character": 1e-10,
    "wigner_norm": 1e-8,
    "wigner_map": 1e-10,
}


def _check(name, parameters, measured, tolerance, discrepancy_ratios=None):
    values = measured.values() if isinstance(measured, dict) else [measured]
    passed = all(v <= tolerance for v in values)
    return {
        "name": name,
        "parameters": parameters,
        "measured": measured,
        "tolerance": tolerance,
        "passed": bool(passed),
        "discrepancy_ratios": discrepancy_ratios or {},
    }


def gram_suite(basis, jmax, order):
    grid = build_grid(basis.tree, order, jmax=jmax)
    gram, indices = normalized_gram(basis, jmax, grid)
    off, diag = identity_deviation(gram)
    params = {"jmax": jmax, "order": order, "functions": len(indices), "nodes": grid.size}
    return [
        _check("grid_mass", {"order": order}, grid_mass_error(grid), TOLERANCES["grid_mass"]),
        _check("gram", params, {"max_offdiag": off, "max_diag_deviation": diag}, TOLERANCES["gram"]),
    ]


def _random_sample(basis, J, rng, guard=1e-6):
    indices = basis.indices(J)
    idx = indices[int(rng.integers(len(indices)))]
    for _ in range(1000):
        point = random_point(basis.tree, rng)
        if chart_singularity(basis.tree, point, guard) is None:
            return idx, point
    raise RuntimeError("could not draw a point away from the chart singularities")


def laplace_suite(basis, jmax, rng, samples=100, step=1e-3):
    worst, worst_at = 0.0, None
    for _ in range(samples):
        J = int(rng.integers(jmax + 1))
        idx, point = _random_sample(basis, J, rng)
        r = laplace_residual(basis, idx, point, step)
        if r > worst:
            worst, worst_at = r, J
    params = {"jmax": jmax, "samples": samples, "step": step, "worst_rank": worst_at}
    return [_check("laplace", params, worst, TOLERANCES["laplace"])]


def addition_suite(basis, jmax, rng, pairs=50):
    checks = []
    for J in range(1, jmax + 1):
        ratios = []
        while len(ratios) < pairs:
            a, b = random_point(basis.tree, rng), random_point(basis.tree, rng)
            try:
                ratios.append(addition_theorem_check(basis, J, a, b)[1])
            except NearZeroError:
                continue
        ratios = np.array(ratios)
        mean = complex(np.mean(ratios))
        spread = float(np.std(ratios) / abs(mean))
        measured_a = measured_addition_constant(basis, J, random_point(basis.tree, rng))
        params = {"J": J, "pairs": pairs, "measured_constant": measured_a, "mean_ratio": mean.real}
        checks.append(_check("addition_spread", params, spread, TOLERANCES["addition_spread"]))
        checks.append(_check("addition_imag", {"J": J}, abs(mean.imag), TOLERANCES["addition_imag"]))
    return checks


def zerovec_suite(basis, jmax, order, rng, points=10):
    checks = []
    d = basis.tree.dim
    for J in range(jmax + 1):
        seed = ZeroLengthSeed.random(basis.tree, rng)
        grid = build_grid(basis.tree, order, jmax=J)
        res = zero_vector_check(basis, J, seed, grid)
        checks.append(_check("zerovec", {"J": J, "order": order, "b_left": list(seed.b_left), "b_right": list(seed.b_right)}, res, TOLERANCES["zerovec"]))
        worst = max(null_vector_laplacian(seed.a, J, rng.standard_normal(d)) for _ in range(points))
        checks.append(_check("null_laplacian", {"J": J, "points": points}, worst, TOLERANCES["null_laplacian"]))
    return checks


def character_suite(jmax, rng, pairs=20, order=48):
    checks = []
    for two_j in range(1, jmax + 1):
        deltas = []
        for _ in range(pairs):
            a = (rng.uniform(0, 2 * math.pi), rng.uniform(0, 0.5 * math.pi), rng.uniform(0, 2 * math.pi))
            b = (rng.uniform(0, 2 * math.pi), rng.uniform(0, 0.5 * math.pi), rng.uniform(0, 2 * math.pi))
            total, expected = character_check(two_j / 2, a, b)
            deltas.append(abs(total - expected))
        checks.append(_check("character", {"j": two_j / 2, "pairs": pairs, "deltas": deltas}, max(deltas), TOLERANCES["character"]))
    for two_j in range(jmax + 1):
        printed = wigner4_norm(two_j, "euler")
        worst, ratio = 0.0, 1.0
        for tmu in range(-two_j, two_j + 1, 2):
            for tnu in range(-two_j, two_j + 1, 2):
                value = wigner_norm_euler(two_j, tmu, tnu, order)
                dev = abs(value / printed - 1.0)
                if dev >= worst:
                    worst, ratio = dev, value / printed
        checks.append(_check("wigner_norm", {"j": two_j / 2, "order": order}, worst, TOLERANCES["wigner_norm"], {"measured/printed": ratio}))
    for J in range(jmax + 1):
        worst = 0.0
        for m1 in range(-J, J + 1):
            for m2 in range(-J, J + 1):
                if abs(m1) + abs(m2) <= J and (J - abs(m1) - abs(m2)) % 2 == 0:
                    worst = max(worst, wigner_map_deviation(J, m1, m2, rng)[1])
        checks.append(_check("wigner_map", {"J": J, "relation": "hsh4_split = c * conj(wigner4)"}, worst, TOLERANCES["wigner_map"]))
    return checks


def applicable_suites(basis):
    tree = basis.tree
    out = ["gram", "laplace"]
    if tree.dim >= 3:
        out.append("addition")
    if isinstance(tree, (Split, Axis)):
        out.append("zerovec")
    if getattr(basis, "name", None) == "wigner4":
        out.append("character")
    return out


def run_suite(basis_or_tree, suite, jmax=4, order=48, seed=0):
    """Run one suite (or "all") and return a report dict with a top-level "passed" flag."""
    basis = as_basis(basis_or_tree)
    allowed = applicable_suites(basis)
    if suite == "all":
        names = allowed
    elif suite in SUITES:
        if suite not in allowed:
            raise ValueError(f"suite {suite!r} does not apply to this basis (applicable: {', '.join(allowed)})")
        names = [suite]
    else:
        raise ValueError(f"unknown suite {suite!r}; choose from {', '.join(SUITES + ('all',))}")
    jmax, order = int(jmax), int(order)
    if jmax < 0:
        raise ValueError("jmax must be non-negative")
    if order < 1:
        raise ValueError("order must be >= 1")
    rng = np.random.default_rng(seed)
    checks = []
    for name in names:
        if name == "gram":
            checks += gram_suite(basis, jmax, order)
        elif name == "laplace":
            checks += laplace_suite(basis, jmax, rng)
        elif name == "addition":
            checks += addition_suite(basis, jmax, rng)
        elif name == "zerovec":
            checks += zerovec_suite(basis, jmax, order, rng)
        else:
            checks += character_suite(jmax, rng, order=order)
    return {
        "basis": getattr(basis, "name", "tree"),
        "dimension": basis.tree.dim,
        "suites": names,
        "parameters": {"jmax": jmax, "order": order, "seed": seed},
        "checks": checks,
        "passed": all(c["passed"] for c in checks),
    }
