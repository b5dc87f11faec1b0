"""Quadrature rules, domain maps, tensor-product integration and the
quadrature (Nystrom) approximation of Fredholm determinants.

Rule construction is delegated to numpy's Gauss node/weight generators;
everything downstream (mapping, composite panels, determinants, tensor
sums) is built here.  All reductions run in a fixed deterministic order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, EvaluationError

__all__ = [
    "QuadratureRule", "DomainMap",
    "gauss_legendre", "gauss_hermite", "map_rule", "legendre_on",
    "composite_legendre", "scaled_gauss_hermite", "hermite_axis_count",
    "fredholm_det", "fredholm_det_matrix", "tensor_integrate",
    "TENSOR_NODE_BUDGET",
]

MAX_LEGENDRE = 512
MAX_HERMITE = 256
TENSOR_NODE_BUDGET = 10 ** 8

#: native domain tags
INTERVAL = "interval"            # finite interval, plain weight
REAL_LINE_HERMITE = "hermite"    # real line, Gaussian weight e^{-t^2} absorbed
HALF_LINE = "half_line"


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes, positive weights and the native domain they live on."""

    nodes: np.ndarray
    weights: np.ndarray
    native_domain: str = INTERVAL

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        weights = np.asarray(self.weights, dtype=float)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)
        if nodes.ndim != 1 or nodes.shape != weights.shape:
            raise ConfigurationError("nodes and weights must be 1-d arrays of equal length")
        if nodes.size == 0:
            raise ConfigurationError("empty quadrature rule")
        if np.any(np.diff(nodes) <= 0):
            raise ConfigurationError("quadrature nodes must be strictly increasing")
        if np.any(weights <= 0):
            raise ConfigurationError("quadrature weights must be positive")

    def __len__(self):
        return self.nodes.size

    def integrate(self, f):
        """Sum w_i f(x_i); f must accept numpy arrays."""
        return np.sum(self.weights * f(self.nodes))


@dataclass(frozen=True)
class DomainMap:
    """Strictly increasing differentiable change of variable.

    kinds:
        identity              -- no-op
        affine                -- [-1, 1] -> [a, b]
        half_line_exp         -- [-1, 1] -> [0, inf), s = -scale*log((1-x)/2)
        real_line_tanh        -- [-1, 1] -> R, t = scale*atanh(x)
    """

    kind: str
    a: float = -1.0
    b: float = 1.0
    scale: float = 1.0

    KINDS = ("identity", "affine", "half_line_exp", "real_line_tanh")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ConfigurationError(f"unknown domain map kind {self.kind!r}")
        if self.kind == "affine" and not self.b > self.a:
            raise ConfigurationError("affine map requires b > a")
        if self.kind in ("half_line_exp", "real_line_tanh") and not self.scale > 0:
            raise ConfigurationError("map scale must be positive")

    def apply(self, x):
        if self.kind == "identity":
            return x, np.ones_like(x)
        if self.kind == "affine":
            half = 0.5 * (self.b - self.a)
            return self.a + half * (x + 1.0), np.full_like(x, half)
        if self.kind == "half_line_exp":
            s = -self.scale * np.log((1.0 - x) / 2.0)
            return s, self.scale / (1.0 - x)
        # real_line_tanh
        return self.scale * np.arctanh(x), self.scale / (1.0 - x * x)


def gauss_legendre(n: int) -> QuadratureRule:
    """n-point Gauss-Legendre rule on [-1, 1]."""
    if not 1 <= n <= MAX_LEGENDRE:
        raise ConfigurationError(f"gauss_legendre order must be in [1, {MAX_LEGENDRE}], got {n}")
    x, w = np.polynomial.legendre.leggauss(int(n))
    return QuadratureRule(x, w, INTERVAL)


def gauss_hermite(n: int) -> QuadratureRule:
    """n-point Gauss-Hermite rule for the weight e^{-t^2} on the real line."""
    if not 1 <= n <= MAX_HERMITE:
        raise ConfigurationError(f"gauss_hermite order must be in [1, {MAX_HERMITE}], got {n}")
    t, w = np.polynomial.hermite.hermgauss(int(n))
    return QuadratureRule(t, w, REAL_LINE_HERMITE)


def map_rule(rule: QuadratureRule, dom: DomainMap) -> QuadratureRule:
    """Transform a rule through a domain map, adjusting weights by the Jacobian."""
    if dom.kind == "identity":
        return rule
    if rule.native_domain != INTERVAL:
        raise ConfigurationError(
            f"domain map {dom.kind!r} requires an interval rule, got {rule.native_domain!r}")
    nodes, jac = dom.apply(rule.nodes)
    target = HALF_LINE if dom.kind == "half_line_exp" else INTERVAL
    return QuadratureRule(nodes, rule.weights * jac, target)


def legendre_on(a: float, b: float, n: int) -> QuadratureRule:
    """Gauss-Legendre rule mapped to the finite interval [a, b]."""
    return map_rule(gauss_legendre(n), DomainMap("affine", a=a, b=b))


def composite_legendre(a: float, b: float, n_panels: int, n_per_panel: int) -> QuadratureRule:
    """Composite Gauss-Legendre rule: n_panels equal panels on [a, b].

    Used for long oscillatory ranges where a single global rule would
    need excessive order.
    """
    if n_panels < 1:
        raise ConfigurationError("need at least one panel")
    edges = np.linspace(a, b, n_panels + 1)
    base = gauss_legendre(n_per_panel)
    nodes = []
    weights = []
    for lo, hi in zip(edges[:-1], edges[1:]):
        half = 0.5 * (hi - lo)
        nodes.append(lo + half * (base.nodes + 1.0))
        weights.append(half * base.weights)
    return QuadratureRule(np.concatenate(nodes), np.concatenate(weights), INTERVAL)


def scaled_gauss_hermite(c: float, n: int) -> QuadratureRule:
    """Rule for integrals of exp(-c z^2) f(z) over the real line.

    Substitutes z = t/sqrt(c) into the e^{-t^2} Gauss-Hermite rule.
    """
    if not c > 0:
        raise ConfigurationError("Gaussian exponent c must be positive")
    base = gauss_hermite(n)
    s = 1.0 / math.sqrt(c)
    return QuadratureRule(base.nodes * s, base.weights * s, base.native_domain)


# A factor analytic in a strip of half-width d around the real axis is
# integrated by n-point Gauss-Hermite with error ~ K exp(-2 d sqrt(2n)),
# K = O(10..100) (measured).  Invert for n with two digits of headroom.
_HERMITE_AXIS_TOL = 1e-9
_HERMITE_AXIS_FLOOR = 48
HERMITE_AXIS_CAP_BY_DIM = {1: 256, 2: 256, 3: 256, 4: 56, 5: 24}


def hermite_axis_count(d_min: float, dim: int, extra_floor: int = 0) -> int:
    """Per-axis Gauss-Hermite order for a pole at scaled distance d_min."""
    if not d_min > 0:
        raise ConfigurationError("pole distance must be positive")
    n = math.ceil((math.log(100.0 / _HERMITE_AXIS_TOL) / (2.0 * d_min)) ** 2 / 2.0)
    cap = HERMITE_AXIS_CAP_BY_DIM[dim]
    floor = min(max(_HERMITE_AXIS_FLOOR, extra_floor), cap)
    return int(min(max(n, floor), cap))


def fredholm_det_matrix(kmat: np.ndarray, weights: np.ndarray) -> float:
    """det(I - W^{1/2} K W^{1/2}) for a kernel already evaluated on a grid."""
    kmat = np.asarray(kmat, dtype=float)
    if not np.all(np.isfinite(kmat)):
        i, j = np.argwhere(~np.isfinite(kmat))[0]
        raise EvaluationError(f"kernel not finite at node pair ({i}, {j})", where=(int(i), int(j)))
    sq = np.sqrt(weights)
    n = kmat.shape[0]
    return float(np.linalg.det(np.eye(n) - sq[:, None] * kmat * sq[None, :]))


def fredholm_det(kernel, rule: QuadratureRule) -> float:
    """Quadrature (Nystrom) approximation of det(1 - K) on the rule's domain.

    ``kernel(x, y)`` must broadcast over numpy arrays.  The discretized
    matrix is M_ij = sqrt(w_i) k(x_i, x_j) sqrt(w_j); the determinant is
    evaluated by pivoted LU elimination.  Spectrally convergent for
    analytic kernels.
    """
    x = rule.nodes
    kmat = np.asarray(kernel(x[:, None], x[None, :]), dtype=float)
    if kmat.shape != (x.size, x.size):
        raise ConfigurationError("kernel did not broadcast to a square matrix")
    if not np.all(np.isfinite(kmat)):
        i, j = np.argwhere(~np.isfinite(kmat))[0]
        raise EvaluationError(
            f"kernel not finite at node pair (x={x[i]!r}, y={x[j]!r})",
            where=(float(x[i]), float(x[j])))
    return fredholm_det_matrix(kmat, rule.weights)


def tensor_integrate(f, rules, vectorized: bool = True) -> complex:
    """Tensor-product quadrature of a complex-valued function of n reals.

    ``f`` receives n broadcast arrays (one per axis) when vectorized,
    or n floats otherwise.  Summation is chunked along the first axis in
    index order; within chunks numpy's pairwise summation applies, so
    the reduction is deterministic.
    """
    rules = list(rules)
    n = len(rules)
    if n < 1 or n > 5:
        raise ConfigurationError(f"tensor dimension must be 1..5, got {n}")
    sizes = [len(r) for r in rules]
    total = math.prod(sizes)
    if total > TENSOR_NODE_BUDGET:
        raise ConfigurationError(
            f"tensor grid of {total} nodes exceeds the {TENSOR_NODE_BUDGET} budget; "
            "use fewer nodes per axis or a lower dimension")
    if not vectorized:
        wrapped = np.vectorize(f, otypes=[complex])
        return tensor_integrate(wrapped, rules, vectorized=True)

    axes = [r.nodes for r in rules]
    wts = [r.weights for r in rules]
    # chunk the first axis to bound memory at ~chunk * prod(rest) points
    rest = total // sizes[0]
    chunk = max(1, min(sizes[0], int(4e5 // max(rest, 1)) or 1))
    acc = 0.0 + 0.0j
    for start in range(0, sizes[0], chunk):
        stop = min(start + chunk, sizes[0])
        grids = np.meshgrid(axes[0][start:stop], *axes[1:], indexing="ij")
        vals = np.asarray(f(*grids), dtype=complex)
        if vals.shape != grids[0].shape:
            raise ConfigurationError("integrand did not broadcast over the tensor grid")
        wgrid = np.meshgrid(wts[0][start:stop], *wts[1:], indexing="ij")
        wprod = wgrid[0]
        for wg in wgrid[1:]:
            wprod = wprod * wg
        acc += np.sum(vals * wprod)
    return complex(acc)
