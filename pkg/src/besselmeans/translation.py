"""Bessel generalized translation (1-D and n-D) and the Poisson operator.

The 1-D translation of order nu averages g over sqrt(s^2 + t^2 - 2 s t cos phi)
against sin^(nu-1) phi on [0, pi]. With p = cos phi the angular weight is the
symmetric Jacobi weight (1 - p^2)^(nu/2 - 1), so every integral here runs on
Gauss-Jacobi nodes and the endpoint behaviour for nu < 2 is exact.
"""
from __future__ import annotations

import numpy as np

from .fields import EvenField, as_multi_index
from .quadrature import gauss_jacobi
from .special import gamma as _gamma

__all__ = [
    "shift_constant",
    "shift1d",
    "shift1d_kernel",
    "shift_nd",
    "poisson",
    "radial_callable",
]

DEFAULT_ORDER = 48
# cap on the number of field evaluations held in memory at once
_CHUNK = 4_000_000


def shift_constant(nu: float) -> float:
    """Gamma((nu+1)/2) / (sqrt(pi) Gamma(nu/2)); makes the translation of 1 equal 1."""
    return float(_gamma(0.5 * (nu + 1.0)) / (np.sqrt(np.pi) * _gamma(0.5 * nu)))


def radial_callable(g):
    """Adapt a 1-D field or a plain callable to ``array -> array``."""
    if isinstance(g, EvenField):
        if g.dim != 1:
            raise ValueError(f"expected a 1-D field, got dim={g.dim}")
        return lambda z: np.asarray(g(np.asarray(z, dtype=float)[..., None]))
    return lambda z: np.asarray(g(np.asarray(z, dtype=float)), dtype=float)


def _check_nu(nu):
    if not nu > 0:
        raise ValueError(f"translation order nu must be positive, got {nu}")


def shift1d(nu: float, g, s, t, order: int = DEFAULT_ORDER):
    """Generalized translation of order nu of g, evaluated at (s, t).

    ``s`` and ``t`` broadcast; the result has their broadcast shape.
    """
    _check_nu(nu)
    s = np.asarray(s, dtype=float)
    t = np.asarray(t, dtype=float)
    if np.any(s < 0) or np.any(t < 0):
        raise ValueError("shift1d: s and t must be nonnegative")
    rule = gauss_jacobi(order, 0.5 * nu - 1.0)
    G = radial_callable(g)
    s, t = np.broadcast_arrays(s, t)
    z2 = (s * s + t * t)[..., None] - 2.0 * (s * t)[..., None] * rule.nodes
    vals = G(np.sqrt(np.maximum(z2, 0.0)))
    out = shift_constant(nu) * (vals @ rule.weights)
    return out if out.ndim else float(out)


def shift1d_kernel(nu: float, g, s, t, order: int = DEFAULT_ORDER):
    """Kernel form of the translation: an integral over z in [|s-t|, s+t].

    2/(2st)^(nu-1) c_nu int z g(z) [(z^2-(s-t)^2)((s+t)^2-z^2)]^(nu/2-1) dz,
    integrated in u = z^2 on Jacobi nodes that absorb both endpoint powers.
    Requires s, t > 0.
    """
    _check_nu(nu)
    s = np.asarray(s, dtype=float)
    t = np.asarray(t, dtype=float)
    if np.any(s <= 0) or np.any(t <= 0):
        raise ValueError("shift1d_kernel: s and t must be positive (degenerate kernel)")
    s, t = np.broadcast_arrays(s, t)
    e = 0.5 * nu - 1.0
    rule = gauss_jacobi(order, e)
    G = radial_callable(g)
    lo2 = (s - t) ** 2
    hi2 = (s + t) ** 2
    half = 0.5 * (hi2 - lo2)
    u = (0.5 * (hi2 + lo2))[..., None] + half[..., None] * rule.nodes
    vals = G(np.sqrt(np.maximum(u, 0.0)))
    # z dz = du / 2 ; kernel^e = half^(2e) (1 - q^2)^e
    integral = 0.5 * half ** (2.0 * e + 1.0) * (vals @ rule.weights)
    out = 2.0 / (2.0 * s * t) ** (nu - 1.0) * shift_constant(nu) * integral
    return out if out.ndim else float(out)


def _tensor_nodes(gam, order, collapse=()):
    """Per-coordinate Jacobi nodes and the flattened tensor weights.

    Coordinates listed in ``collapse`` get a single node of weight 1: the
    translation there is point evaluation.
    """
    nodes, w = [], np.ones(1)
    for i, g in enumerate(gam.entries):
        if i in collapse:
            nodes.append(np.zeros(1))
            continue
        r = gauss_jacobi(order, 0.5 * g - 1.0)
        nodes.append(r.nodes)
        w = np.multiply.outer(w, shift_constant(g) * r.weights).ravel()
    return nodes, w


def shift_nd(gamma, f: EvenField, x, y, order: int = DEFAULT_ORDER, factorize: bool = True):
    """Multidimensional translation T^y f(x), one 1-D translation per coordinate.

    ``x`` has shape ``(n,)``; ``y`` has shape ``(n,)`` or ``(m, n)`` for a
    batch of offsets. Non-separable fields may return trailing value axes,
    which are carried through unchanged. For separable fields the n-fold tensor quadrature
    factors into per-coordinate 1-D quadratures (same nodes, same sum);
    ``factorize=False`` forces the explicit tensor sum.
    """
    gam = as_multi_index(gamma)
    n = gam.n
    x = np.asarray(x, dtype=float).reshape(-1)
    y = np.asarray(y, dtype=float)
    scalar = y.ndim == 1
    y = np.atleast_2d(y)
    if x.size != n or y.shape[-1] != n or f.dim != n:
        raise ValueError(
            f"shift_nd: dimension mismatch (gamma {n}, x {x.size}, y {y.shape[-1]}, field {f.dim})"
        )
    if np.any(x < 0) or np.any(y < 0):
        raise ValueError("shift_nd: points must lie in the closed positive orthant")
    if factorize and f.separable_terms is not None:
        out = _shift_separable(gam, f, x, y, order)
    else:
        out = _shift_general(gam, f, x, y, order)
    if scalar:
        return float(out[0]) if out.ndim == 1 else out[0]
    return out


def _shift_separable(gam, f, x, y, order):
    cache = {}
    out = np.zeros(y.shape[0])
    for c, factors in f.separable_terms:
        prod = np.full(y.shape[0], c)
        for i, fac in enumerate(factors):
            key = (i, id(fac))
            if key not in cache:
                vals, inv = np.unique(y[:, i], return_inverse=True)
                cache[key] = shift1d(gam.entries[i], fac, x[i], vals, order)[inv.ravel()]
            prod = prod * cache[key]
        out += prod
    return out


def _shift_general(gam, f, x, y, order):
    # fields may carry trailing value axes; they pass through the sum
    n = gam.n
    collapse = tuple(i for i in range(n) if x[i] == 0 or not np.any(y[:, i]))
    nodes, w = _tensor_nodes(gam, order, collapse)
    sizes = tuple(len(p) for p in nodes)
    q = w.size
    m = y.shape[0]
    out = None
    step = max(1, _CHUNK // (q * n))
    start = 0
    while start < m:
        yb = y[start:start + step]
        b = yb.shape[0]
        pts = np.empty((b,) + sizes + (n,))
        for i in range(n):
            zi2 = x[i] ** 2 + yb[:, i, None] ** 2 - 2.0 * x[i] * yb[:, i, None] * nodes[i]
            shape = [b] + [1] * n
            shape[i + 1] = sizes[i]
            pts[..., i] = np.sqrt(np.maximum(zi2, 0.0)).reshape(shape)
        vals = np.asarray(f(pts))
        vals = vals.reshape((b, q) + vals.shape[n + 1:])
        if out is None:
            out = np.empty((m,) + vals.shape[2:])
            width = int(np.prod(vals.shape[2:], dtype=int))
            step = max(1, _CHUNK // (q * (n + width)))
        out[start:start + b] = np.tensordot(w, vals, axes=(0, 1))
        start += b
    return out


def poisson(gamma, f: EvenField, x, order: int = DEFAULT_ORDER, factorize: bool = True) -> float:
    """Poisson operator: average of f(x_1 cos a_1, ..., x_n cos a_n).

    Each angle carries sin^(gamma_j - 1) a_j normalized by
    Gamma((gamma_j+1)/2) / (sqrt(pi) Gamma(gamma_j/2)), so the operator maps
    the constant 1 to 1. Arguments are folded to |x_j cos a_j|, which is
    harmless for even fields.
    """
    gam = as_multi_index(gamma)
    x = np.asarray(x, dtype=float).reshape(-1)
    if x.size != gam.n or f.dim != gam.n:
        raise ValueError("poisson: dimension mismatch")
    if factorize and f.separable_terms is not None:
        total = 0.0
        for c, factors in f.separable_terms:
            prod = c
            for i, fac in enumerate(factors):
                rule = gauss_jacobi(order, 0.5 * gam.entries[i] - 1.0)
                vals = radial_callable(fac)(np.abs(x[i] * rule.nodes))
                prod *= shift_constant(gam.entries[i]) * float(vals @ rule.weights)
            total += prod
        return float(total)
    nodes, w = _tensor_nodes(gam, order)
    axes = [np.abs(x[i] * nodes[i]) for i in range(gam.n)]
    grids = np.meshgrid(*axes, indexing="ij")
    pts = np.stack([g.ravel() for g in grids], axis=-1)
    return float(np.asarray(f(pts)) @ w)
