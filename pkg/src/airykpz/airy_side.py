"""Airy point process side: correlation kernel, Laplace-transformed
correlation functions, cycle integrals, Cauchy determinant, multiplicative
statistics, moments of h_k, and the Tracy-Widom distribution F2.

The Airy point process is the determinantal process on the real line with
kernel K(x, y) = (Ai(x)Ai'(y) - Ai'(x)Ai(y))/(x - y).  Everything here is
a deterministic quadrature computation; the Monte Carlo counterpart lives
in :mod:`airykpz.montecarlo` and the KPZ counterpart in
:mod:`airykpz.kpz_side`.
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from .errors import (ConfigurationError, DomainError, NumericalConsistencyError,
                     SingularityError)
from .params import ModelParams
from .quadrature import (QuadratureRule, composite_legendre, fredholm_det_matrix,
                         hermite_axis_count, legendre_on, scaled_gauss_hermite,
                         tensor_integrate)
from .specfun import airy_both

__all__ = [
    "KERNEL_RANGE", "airy_kernel", "airy_kernel_matrix", "kernel_integral_form",
    "okounkov_integral", "okounkov_quadrature", "cauchy_det", "cauchy_det_direct",
    "laplace_R", "cycle_E", "airy_h_moment", "airy_mult_stat",
    "default_mult_stat_grid", "tracy_widom_f2", "default_f2_grid",
]

KERNEL_RANGE = 50.0
_CONFLUENT_EPS = 1e-5     # |x - y| below which the confluent diagonal form is used
_IM_TOL = 1e-10           # allowed |Im|/|Re| residue for analytically real integrals
_AXIS_FLOOR = 48


# ----------------------------------------------------------------------
# correlation kernel

def airy_kernel(x, y):
    """Airy correlation kernel, Christoffel-Darboux ratio form.

    Near the diagonal (|x - y| <= 1e-5) the confluent limit at the
    midpoint m is used: Ai'(m)^2 - m Ai(m)^2.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if (x.size and np.max(np.abs(x)) > KERNEL_RANGE) or (y.size and np.max(np.abs(y)) > KERNEL_RANGE):
        raise DomainError(f"airy_kernel arguments must satisfy |x|, |y| <= {KERNEL_RANGE:g}")
    x, y = np.broadcast_arrays(x, y)
    scalar = x.ndim == 0
    x = np.atleast_1d(x).astype(float)
    y = np.atleast_1d(y).astype(float)
    d = x - y
    near = np.abs(d) <= _CONFLUENT_EPS
    out = np.empty_like(d)
    if np.any(~near):
        ax, apx = airy_both(x[~near])
        ay, apy = airy_both(y[~near])
        out[~near] = (ax * apy - apx * ay) / d[~near]
    if np.any(near):
        m = 0.5 * (x[near] + y[near])
        am, apm = airy_both(m)
        out[near] = apm ** 2 - m * am ** 2
    return float(out[0]) if scalar else out


def airy_kernel_matrix(points: np.ndarray) -> np.ndarray:
    """Kernel matrix K(x_i, x_j) on a grid, one Airy evaluation per node."""
    pts = np.asarray(points, dtype=float)
    if pts.size and np.max(np.abs(pts)) > KERNEL_RANGE:
        raise DomainError(f"grid exceeds the kernel range |x| <= {KERNEL_RANGE:g}")
    ai, aip = airy_both(pts)
    d = pts[:, None] - pts[None, :]
    num = ai[:, None] * aip[None, :] - aip[:, None] * ai[None, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        kmat = num / d
    # diagonal (and any accidental near-coincident pair) via the confluent form
    near = np.abs(d) <= _CONFLUENT_EPS
    if np.any(near):
        m = 0.5 * (pts[:, None] + pts[None, :])
        am, apm = airy_both(m[near])
        kmat[near] = apm ** 2 - m[near] * am ** 2
    return kmat


def kernel_integral_form(x: float, y: float, rule: QuadratureRule | None = None) -> float:
    """The kernel through its half-line integral of Ai(x+a)Ai(y+a).

    Independent of :func:`airy_kernel`; agrees with it to ~1e-9 on
    [-10, 10]^2.  The default rule truncates [0, inf) where the Airy
    decay has killed the integrand and resolves the oscillation that a
    negative min(x, y) brings in.
    """
    if max(abs(x), abs(y)) > KERNEL_RANGE:
        raise DomainError(f"kernel arguments must satisfy |x|, |y| <= {KERNEL_RANGE:g}")
    if rule is None:
        upper = 16.0 - min(x, y, 0.0)
        rule = composite_legendre(0.0, upper, int(math.ceil(upper)), 10)
    if np.min(rule.nodes) < 0:
        raise DomainError("kernel_integral_form requires a rule on the half line a >= 0")
    a = rule.nodes
    fx, _ = airy_both(x + a)
    fy, _ = airy_both(y + a)
    return float(np.sum(rule.weights * fx * fy))


# ----------------------------------------------------------------------
# Laplace-transform building blocks

def okounkov_integral(x: float, a: float, b: float) -> float:
    """Closed form of the two-sided Laplace transform of Ai(z+a)Ai(z+b).

    Equals (1/(2 sqrt(pi x))) exp(x^3/12 - (a+b)x/2 - (a-b)^2/(4x)) for
    x > 0; symmetric in (a, b).
    """
    if not x > 0:
        raise DomainError("okounkov_integral requires x > 0")
    return float(np.exp(x ** 3 / 12.0 - 0.5 * (a + b) * x - (a - b) ** 2 / (4.0 * x))
                 / (2.0 * np.sqrt(np.pi * x)))


def okounkov_quadrature(x: float, a: float, b: float,
                        rule: QuadratureRule | None = None) -> float:
    """Direct quadrature of exp(xz) Ai(z+a) Ai(z+b) dz over the real line.

    Test-mode companion of :func:`okounkov_integral`.
    """
    if not x > 0:
        raise DomainError("okounkov_quadrature requires x > 0")
    if rule is None:
        # left tail decays like e^{xz}, right tail superexponentially; the
        # integrand's exponent peaks near z = x^2/4.  Clamp to the Airy
        # support: beyond it the e^{xz} factor has long killed the tail.
        lo = max(-(30.0 / x + 10.0) + min(a, b, 0.0),
                 -59.5 - min(a, b, 0.0))
        hi = x * x / 4.0 + 18.0 - min(a, b, 0.0)
        rule = composite_legendre(lo, hi, int(math.ceil((hi - lo) / 2.0)), 14)
    z = rule.nodes
    fa, _ = airy_both(z + a)
    fb, _ = airy_both(z + b)
    return float(np.sum(rule.weights * np.exp(x * z) * fa * fb))


def cauchy_det(a: Sequence[complex], b: Sequence[complex]) -> complex:
    """det[1/(a_i + b_j)] by the Cauchy product formula.

    O(n^2) instead of O(n^3); raises :class:`SingularityError` when some
    a_i + b_j comes within 1e-12 of zero.
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape or a.ndim != 1 or a.size == 0:
        raise ConfigurationError("cauchy_det needs two equal-length nonempty vectors")
    denom = a[:, None] + b[None, :]
    bad = np.abs(denom) < 1e-12
    if np.any(bad):
        i, j = np.argwhere(bad)[0]
        raise SingularityError(f"a[{i}] + b[{j}] is within 1e-12 of zero",
                               indices=(int(i), int(j)))
    val = np.prod(1.0 / np.diag(denom))
    n = a.size
    for i in range(n):
        for j in range(i + 1, n):
            val *= (a[i] - a[j]) * (b[i] - b[j]) / (denom[i, j] * denom[j, i])
    return complex(val)


def cauchy_det_direct(a: Sequence[complex], b: Sequence[complex]) -> complex:
    """Same determinant by pivoted elimination; the test oracle."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    return complex(np.linalg.det(1.0 / (a[:, None] + b[None, :])))


def _cauchy_grid(avals: list, bvals: list, direct: bool):
    """Cauchy determinant over broadcast grids of a_i, b_j values."""
    n = len(avals)
    if direct:
        shape = np.broadcast(*avals).shape
        mat = np.empty(shape + (n, n), dtype=complex)
        for i in range(n):
            for j in range(n):
                mat[..., i, j] = 1.0 / (avals[i] + bvals[j])
        return np.linalg.det(mat)
    val = 1.0 / (avals[0] + bvals[0])
    for i in range(1, n):
        val = val / (avals[i] + bvals[i])
    for i in range(n):
        for j in range(i + 1, n):
            val = val * ((avals[i] - avals[j]) * (bvals[i] - bvals[j])
                         / ((avals[i] + bvals[j]) * (avals[j] + bvals[i])))
    return val


def _require_positive_c(c) -> np.ndarray:
    c = np.asarray(c, dtype=float)
    if c.ndim != 1 or c.size == 0:
        raise DomainError("need a nonempty vector of Laplace exponents")
    if np.any(c <= 0):
        raise DomainError("Laplace exponents must be strictly positive")
    if np.any(c > 20.0):
        raise DomainError("Laplace exponent above 20: exp(c^3/12) overflows "
                          "double precision")
    if c.size > 5:
        raise ConfigurationError("at most 5 Laplace exponents are supported")
    return c


def _real_part(val: complex, what: str, tol: float = _IM_TOL) -> float:
    if abs(val.imag) > tol * (abs(val.real) + 1e-300):
        raise NumericalConsistencyError(
            f"{what}: imaginary residue {val.imag:.3e} exceeds {tol:g} of {val.real:.3e}")
    return val.real


def laplace_R(c: Sequence[float], nodes_per_axis: int | None = None,
              method: str = "cauchy") -> float:
    """Laplace transform of the n-point correlation function.

    Evaluates
        exp(sum c_i^3/12)/(2 pi)^n * int exp(-sum c_i z_i^2)
            det[1/((-i z_i + c_i/2) + (i z_j + c_j/2))] dz
    with per-axis Gauss-Hermite scaled by 1/sqrt(c_i).  ``method`` picks
    the Cauchy product form (default) or the direct determinant (test
    oracle).  The result is analytically real; the imaginary residue is
    checked against 1e-10 and discarded.
    """
    c = _require_positive_c(c)
    n = c.size
    if method not in ("cauchy", "direct"):
        raise ConfigurationError(f"unknown laplace_R method {method!r}")
    if nodes_per_axis is None:
        if n == 1:
            nodes_per_axis = _AXIS_FLOOR  # integrand is constant; any order is exact
        else:
            d_min = min(math.sqrt(c[i]) * (c[i] + c[j]) / 2.0
                        for i in range(n) for j in range(n) if i != j)
            nodes_per_axis = hermite_axis_count(d_min, n)
    rules = [scaled_gauss_hermite(ci, nodes_per_axis) for ci in c]

    def integrand(*zs):
        avals = [-1j * z + ci / 2.0 for z, ci in zip(zs, c)]
        bvals = [1j * z + ci / 2.0 for z, ci in zip(zs, c)]
        return _cauchy_grid(avals, bvals, direct=(method == "direct"))

    pref = math.exp(np.sum(c ** 3) / 12.0) / (2.0 * math.pi) ** n
    val = pref * tensor_integrate(integrand, rules)
    return _real_part(val, "laplace_R")


def cycle_E(c: Sequence[float], nodes_per_axis: int | None = None) -> float:
    """Cyclic integral: the single-cycle building block of laplace_R.

    exp(sum c_i^3/12)/(2 pi)^n * int exp(-sum c_i z_i^2)
        prod_i 1/(-i (z_i - z_{i+1}) + (c_i + c_{i+1})/2) dz,
    with the cyclic convention z_{n+1} = z_1.
    """
    c = _require_positive_c(c)
    n = c.size
    if n > 4:
        raise ConfigurationError("cycle_E supports at most 4 exponents")
    if nodes_per_axis is None:
        if n == 1:
            nodes_per_axis = _AXIS_FLOOR
        else:
            d_min = min(math.sqrt(c[i]) * (c[i] + c[(i + 1) % n]) / 2.0
                        for i in range(n))
            d_min = min(d_min, min(math.sqrt(c[(i + 1) % n]) * (c[i] + c[(i + 1) % n]) / 2.0
                                   for i in range(n)))
            nodes_per_axis = hermite_axis_count(d_min, n)
    rules = [scaled_gauss_hermite(ci, nodes_per_axis) for ci in c]

    def integrand(*zs):
        val = None
        for i in range(n):
            j = (i + 1) % n
            term = 1.0 / (-1j * (zs[i] - zs[j]) + (c[i] + c[j]) / 2.0)
            val = term if val is None else val * term
        return val

    pref = math.exp(np.sum(c ** 3) / 12.0) / (2.0 * math.pi) ** n
    val = pref * tensor_integrate(integrand, rules)
    return _real_part(val, "cycle_E")


def airy_h_moment(k: int, C: float, nodes_per_axis: int | None = None) -> float:
    """Expectation of h_k over exp(C a_1), exp(C a_2), ... via the
    partition expansion: sum over partitions of k of
    laplace_R(C lambda) / prod(multiplicity factorials)."""
    from .kpz_side import partitions, symmetry_factor

    if not 1 <= k <= 5:
        raise ConfigurationError("airy_h_moment supports 1 <= k <= 5")
    if not C > 0:
        raise DomainError("airy_h_moment requires C > 0")
    total = 0.0
    for lam in partitions(k):
        c = [C * p for p in lam.parts]
        total += laplace_R(c, nodes_per_axis) / symmetry_factor(lam)
    return total


# ----------------------------------------------------------------------
# multiplicative statistics and the Tracy-Widom law

def _fermi_weight(r: np.ndarray, u: float, C: float) -> np.ndarray:
    """f(r) = 1/(1 + exp(-(C r + log u))), evaluated without overflow."""
    t = C * r + math.log(u)
    out = np.empty_like(r)
    pos = t > 0
    out[pos] = 1.0 / (1.0 + np.exp(-t[pos]))
    out[~pos] = np.exp(t[~pos]) / (1.0 + np.exp(t[~pos]))
    return out


def default_mult_stat_grid(params: ModelParams, n: int = 80) -> QuadratureRule:
    """Two-sided truncation for the weighted-kernel determinant.

    The weight dies like u e^{C r} to the left (shifted by log u for
    u > 1), the kernel superexponentially to the right.
    """
    shift = max(0.0, math.log(params.u)) if params.u > 0 else 0.0
    left = -(16.0 + shift) / params.C - 4.0
    return legendre_on(left, 12.0, n)


def airy_mult_stat(params: ModelParams, grid: QuadratureRule | None = None) -> float:
    """E prod_k 1/(1 + u exp(C a_k)) as a Fredholm determinant.

    Discretizes det(1 - sqrt(f) K sqrt(f)) with f(r) = 1/(1 + u^{-1} e^{-Cr});
    the symmetrized split leaves the determinant unchanged and keeps the
    matrix symmetric.  u = 0 gives exactly 1.
    """
    if params.u == 0:
        return 1.0
    if grid is None:
        grid = default_mult_stat_grid(params)
    kmat = airy_kernel_matrix(grid.nodes)
    f = _fermi_weight(grid.nodes, params.u, params.C)
    val = fredholm_det_matrix(kmat, grid.weights * f)
    if not 0.0 < val <= 1.0 + 1e-10:
        raise NumericalConsistencyError(
            f"multiplicative statistic {val!r} outside (0, 1]")
    return min(val, 1.0)


def default_f2_grid(s: float, n: int = 80) -> QuadratureRule:
    return legendre_on(s, s + 24.0, n)


def tracy_widom_f2(s: float, grid: QuadratureRule | None = None) -> float:
    """GUE Tracy-Widom distribution F2(s) = det(1 - K) on [s, inf)."""
    if not -10.0 <= s <= 6.0:
        raise DomainError("tracy_widom_f2 supports s in [-10, 6]")
    if grid is None:
        grid = default_f2_grid(s)
    kmat = airy_kernel_matrix(grid.nodes)
    val = fredholm_det_matrix(kmat, grid.weights)
    if not 0.0 < val < 1.0:
        raise NumericalConsistencyError(f"F2({s}) = {val!r} outside (0, 1)")
    return val
