"""Gauss rules: Legendre, Jacobi (Golub-Welsch) and tensor part-sphere rules.

The part-sphere S_1^+(n) is parametrized by recursive angles
theta_1..theta_{n-1} in [0, pi/2]; each angular factor of y^gamma dS is
cos^a(theta) sin^b(theta) d(theta), which the substitution p = cos(2 theta)
turns into a Jacobi weight (1-p)^((b-1)/2) (1+p)^((a-1)/2). Even fields are
polynomials in y_i^2, hence in p, so the rules integrate them exactly up to
their degree.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .special import gamma as _gamma

__all__ = [
    "QuadRule",
    "SphereRule",
    "QuadOrders",
    "gauss_legendre",
    "gauss_jacobi",
    "jacobi_mass",
    "interval_rule",
    "sphere_rule",
]


@dataclass(frozen=True)
class QuadOrders:
    """Node counts per 1-D factor for each family of integrals."""

    sphere: int = 48
    shift: int = 48
    radial: int = 48
    transform: int = 96

    def __post_init__(self):
        for name in ("sphere", "shift", "radial", "transform"):
            value = getattr(self, name)
            if int(value) != value or value < 1:
                raise ValueError(f"order '{name}' must be a positive integer, got {value!r}")

    def scaled(self, factor: float) -> "QuadOrders":
        return QuadOrders(
            sphere=max(1, int(round(self.sphere * factor))),
            shift=max(1, int(round(self.shift * factor))),
            radial=max(1, int(round(self.radial * factor))),
            transform=max(1, int(round(self.transform * factor))),
        )


@dataclass(frozen=True, eq=False)
class QuadRule:
    """1-D rule for int_{-1}^{1} f(p) (1-p)^alpha (1+p)^beta dp."""

    nodes: np.ndarray
    weights: np.ndarray
    kind: str
    alpha: float
    beta: float

    @property
    def order(self) -> int:
        return len(self.nodes)

    @property
    def mass(self) -> float:
        return float(np.sum(self.weights))

    def integrate(self, f) -> float:
        return float(np.dot(self.weights, f(self.nodes)))

    def __repr__(self):
        return f"QuadRule(kind={self.kind!r}, order={self.order}, alpha={self.alpha}, beta={self.beta})"


def jacobi_mass(alpha: float, beta: float | None = None) -> float:
    """int_{-1}^{1} (1-p)^alpha (1+p)^beta dp."""
    if beta is None:
        beta = alpha
    return float(
        2.0 ** (alpha + beta + 1.0)
        * _gamma(alpha + 1.0)
        * _gamma(beta + 1.0)
        / _gamma(alpha + beta + 2.0)
    )


def _frozen(a):
    a = np.ascontiguousarray(a, dtype=float)
    a.setflags(write=False)
    return a


@lru_cache(maxsize=512)
def _golub_welsch(order: int, alpha: float, beta: float):
    k = np.arange(order, dtype=float)
    ab = alpha + beta
    diag = np.empty(order)
    diag[0] = (beta - alpha) / (ab + 2.0)
    if order > 1:
        kk = k[1:]
        s = 2.0 * kk + ab
        diag[1:] = (beta * beta - alpha * alpha) / (s * (s + 2.0))
    off = np.empty(max(order - 1, 0))
    if order > 1:
        off[0] = 4.0 * (1.0 + alpha) * (1.0 + beta) / ((2.0 + ab) ** 2 * (3.0 + ab))
        if order > 2:
            kk = k[2:]
            s = 2.0 * kk + ab
            off[1:] = (
                4.0 * kk * (kk + alpha) * (kk + beta) * (kk + ab)
                / (s * s * (s + 1.0) * (s - 1.0))
            )
        off = np.sqrt(off)
    if order == 1:
        nodes = diag.copy()
        vecs = np.ones((1, 1))
    else:
        nodes, vecs = eigh_tridiagonal(diag, off)
    weights = jacobi_mass(alpha, beta) * vecs[0, :] ** 2
    idx = np.argsort(nodes)
    nodes, weights = nodes[idx], weights[idx]
    if alpha == beta:
        # exact mirror symmetry
        nodes = 0.5 * (nodes - nodes[::-1])
        weights = 0.5 * (weights + weights[::-1])
        if order % 2:
            nodes[order // 2] = 0.0
    return _frozen(nodes), _frozen(weights)


def gauss_jacobi(order: int, alpha: float, beta: float | None = None) -> QuadRule:
    """Gauss rule for the Jacobi weight (1-p)^alpha (1+p)^beta on [-1, 1].

    ``beta`` defaults to ``alpha`` (the symmetric weight (1-p^2)^alpha).
    Nodes and weights come from the eigen-decomposition of the Jacobi
    matrix of the three-term recurrence (Golub-Welsch). The rule is exact
    for polynomials of degree <= 2*order - 1.
    """
    if int(order) != order or order < 1:
        raise ValueError(f"order must be a positive integer, got {order!r}")
    if beta is None:
        beta = alpha
    if not (alpha > -1.0 and beta > -1.0):
        raise ValueError(f"Jacobi exponents must exceed -1, got alpha={alpha}, beta={beta}")
    nodes, weights = _golub_welsch(int(order), float(alpha), float(beta))
    kind = "legendre" if alpha == 0 and beta == 0 else "jacobi"
    return QuadRule(nodes, weights, kind, float(alpha), float(beta))


def gauss_legendre(order: int) -> QuadRule:
    """Gauss-Legendre rule on [-1, 1], exact to degree 2*order - 1."""
    return gauss_jacobi(order, 0.0, 0.0)


def interval_rule(order: int, a: float, b: float, alpha: float = 0.0, beta: float = 0.0):
    """Nodes/weights for int_a^b h(x) (b-x)^alpha (x-a)^beta dx.

    Returns ``(x, w)`` with the weight powers absorbed into ``w``.
    """
    rule = gauss_jacobi(order, alpha, beta)
    half = 0.5 * (b - a)
    x = a + half * (rule.nodes + 1.0)
    w = rule.weights * half ** (alpha + beta + 1.0)
    return x, w


@dataclass(frozen=True, eq=False)
class SphereRule:
    """Quadrature on the part-sphere S_1^+(n) for the measure y^gamma dS(y)."""

    dim: int
    gamma: tuple
    points: np.ndarray
    weights: np.ndarray
    order: int

    @property
    def mass(self) -> float:
        return float(np.sum(self.weights))

    def __len__(self):
        return len(self.weights)


@lru_cache(maxsize=128)
def _sphere_rule(gamma: tuple, order: int):
    n = len(gamma)
    if n == 1:
        return _frozen(np.ones((1, 1))), _frozen(np.ones(1))
    g = np.asarray(gamma, dtype=float)
    cos_list, sin_list, w_list = [], [], []
    for k in range(n - 1):
        a = g[k]
        b = g[k + 1:].sum() + (n - 2 - k)
        rule = gauss_jacobi(order, 0.5 * (b - 1.0), 0.5 * (a - 1.0))
        p = rule.nodes
        cos_list.append(np.sqrt(0.5 * (1.0 + p)))
        sin_list.append(np.sqrt(0.5 * (1.0 - p)))
        w_list.append(rule.weights * 2.0 ** (-0.5 * (a + b) - 1.0))
    grids_c = np.meshgrid(*cos_list, indexing="ij")
    grids_s = np.meshgrid(*sin_list, indexing="ij")
    grids_w = np.meshgrid(*w_list, indexing="ij")
    m = order ** (n - 1)
    pts = np.empty((m, n))
    prefix = np.ones(m)
    for k in range(n - 1):
        pts[:, k] = prefix * grids_c[k].ravel()
        prefix = prefix * grids_s[k].ravel()
    pts[:, n - 1] = prefix
    w = np.ones(m)
    for gw in grids_w:
        w = w * gw.ravel()
    return _frozen(pts), _frozen(w)


def sphere_rule(n: int, gamma, order: int) -> SphereRule:
    """Tensor rule on S_1^+(n) whose weights absorb y^gamma dS(y).

    For n = 1 the part-sphere is the single point {1} with weight 1.
    """
    g = tuple(float(v) for v in np.atleast_1d(np.asarray(gamma, dtype=float)))
    if n < 1 or len(g) != n:
        raise ValueError(f"sphere_rule: gamma must have n={n} entries, got {len(g)}")
    if any(not (v > 0) for v in g):
        raise ValueError(f"sphere_rule: every gamma entry must be positive, got {g}")
    if int(order) != order or order < 1:
        raise ValueError(f"order must be a positive integer, got {order!r}")
    pts, w = _sphere_rule(g, int(order))
    return SphereRule(n, g, pts, w, int(order))

