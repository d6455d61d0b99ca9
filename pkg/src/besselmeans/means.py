"""Weighted spherical means and the iterated mean by independent routes.

Notation: N = n + |gamma|, nu = N - 1, and the radial kernel exponent is
(N - 3)/2. The iterated mean I(x; lam, mu) = M_lam M_mu f(x) is computed

* ``iterated_direct``: double part-sphere sum of two composed translations;
* ``iterated_via_translation``: a radial translation of order nu applied to
  r -> M_f(x; r);
* ``iterated_via_kernel``: the explicit radial kernel integral over
  r in [|lam - mu|, lam + mu];
* ``iterated_alpha_beta``: the same integral parametrized by
  alpha = |lam - mu|, beta = lam + mu.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .fields import EvenField, as_multi_index
from .quadrature import QuadOrders, gauss_jacobi, interval_rule, sphere_rule
from .special import gamma as _gamma
from .translation import radial_callable, shift1d, shift_constant, shift_nd

__all__ = [
    "sphere_constant",
    "printed_poisson_constant",
    "MeanEvaluation",
    "spherical_mean",
    "iterated_direct",
    "iterated_via_translation",
    "iterated_via_kernel",
    "iterated_alpha_beta",
    "evaluate_iterated",
    "ball_integral",
    "ball_integral_check",
    "ball_derivative_check",
    "plane_wave_sphere_integral",
]

_CHUNK = 4_000_000


def sphere_constant(n: int, gamma) -> float:
    """|S_1^+(n)|_gamma = prod Gamma((gamma_i+1)/2) / (2^(n-1) Gamma((n+|gamma|)/2))."""
    g = as_multi_index(gamma)
    if g.n != n:
        raise ValueError(f"sphere_constant: gamma has {g.n} entries, expected {n}")
    return float(
        np.prod(_gamma(0.5 * (g.array + 1.0))) / (2.0 ** (n - 1) * _gamma(0.5 * (n + g.length)))
    )


def printed_poisson_constant(gamma) -> float:
    """prod Gamma((gamma_i+1)/2) / (sqrt(pi) 2^(n-1) Gamma((|gamma|+n-1)/2))."""
    g = as_multi_index(gamma)
    return float(
        np.prod(_gamma(0.5 * (g.array + 1.0)))
        / (np.sqrt(np.pi) * 2.0 ** (g.n - 1) * _gamma(0.5 * (g.length + g.n - 1.0)))
    )


def _orders(orders: Optional[QuadOrders]) -> QuadOrders:
    return QuadOrders() if orders is None else orders


def _point(x, n):
    x = np.asarray(x, dtype=float).reshape(-1)
    if x.size != n:
        raise ValueError(f"expected a point with {n} coordinates, got {x.size}")
    if np.any(x < 0):
        raise ValueError("points must lie in the closed positive orthant")
    return x


@dataclass(frozen=True)
class MeanEvaluation:
    """One evaluated mean, tagged with the route used to compute it.

    ``lam``/``mu`` are set for iterated means; ``r`` for single means.
    """

    x: tuple
    value: float
    path: str
    orders: QuadOrders
    r: Optional[float] = None
    lam: Optional[float] = None
    mu: Optional[float] = None
    f_at_x: Optional[float] = field(default=None, compare=False)

    def __post_init__(self):
        if self.path not in ("direct", "translation", "kernel", "symmetric"):
            raise ValueError(f"unknown path {self.path!r}")
        radius = self.r if self.r is not None else (
            None if self.lam is None else max(self.lam, self.mu or 0.0)
        )
        if self.path == "direct" and radius == 0 and self.f_at_x is not None:
            if abs(self.value - self.f_at_x) > 1e-12 * (1.0 + abs(self.f_at_x)):
                raise ValueError("mean at radius 0 must reproduce f(x)")


def spherical_mean(gamma, f: EvenField, x, r, orders: Optional[QuadOrders] = None, factorize: bool = True):
    """Weighted spherical mean M_f(x; r) for a scalar or array of radii."""
    gam = as_multi_index(gamma)
    orders = _orders(orders)
    x = _point(x, gam.n)
    r_arr = np.asarray(r, dtype=float)
    if np.any(r_arr < 0):
        raise ValueError("spherical_mean: radius must be nonnegative")
    rule = sphere_rule(gam.n, gam.entries, orders.sphere)
    radii = r_arr.reshape(-1)
    offsets = (radii[:, None, None] * rule.points[None, :, :]).reshape(-1, gam.n)
    vals = shift_nd(gam, f, x, offsets, orders.shift, factorize=factorize)
    out = vals.reshape(radii.size, len(rule)) @ rule.weights / sphere_constant(gam.n, gam)
    out = out.reshape(r_arr.shape)
    return out if out.ndim else float(out)


# ---------------------------------------------------------------------------
# direct route
# ---------------------------------------------------------------------------

def _composed_table(nu, fac, x, a, b, order):
    """T_x^a T_x^b g(x) for every a in ``a`` and b in ``b`` (1-D, order nu)."""
    G = radial_callable(fac)
    rule = gauss_jacobi(order, 0.5 * nu - 1.0)
    p, w = rule.nodes, rule.weights
    c = shift_constant(nu)
    if x == 0:
        # the outer translation at the origin is point evaluation
        u = a[:, None]
        wu = np.ones(1)
    else:
        u = np.sqrt(np.maximum(x * x + a[:, None] ** 2 - 2.0 * x * a[:, None] * p, 0.0))
        wu = c * w
    nu_ = u.shape[1]
    out = np.empty((a.size, b.size))
    step = max(1, _CHUNK // max(1, b.size * nu_ * p.size))
    for s in range(0, a.size, step):
        ub = u[s:s + step, None, :, None]
        z2 = ub * ub + b[None, :, None, None] ** 2 - 2.0 * ub * b[None, :, None, None] * p
        vals = G(np.sqrt(np.maximum(z2, 0.0)))
        out[s:s + step] = c * np.einsum("abij,i,j->ab", vals, wu, w)
    return out


# Chebyshev resolution, per variable, of compressed composed-translation tables
TABLE_NODES = 48


def _cheb_points(hi, k=TABLE_NODES):
    j = np.arange(k)
    theta = (2 * j + 1) * np.pi / (2 * k)
    return 0.5 * hi * (1.0 - np.cos(theta)), (-1.0) ** j * np.sin(theta)


def _barycentric_matrix(nodes, bary_w, targets):
    diff = targets[:, None] - nodes[None, :]
    hit = diff == 0
    diff[hit] = 1.0
    mat = bary_w / diff
    mat /= mat.sum(axis=1, keepdims=True)
    rows = hit.any(axis=1)
    mat[rows] = hit[rows].astype(float)
    return mat


def _pair_table(nu, fac, x, a_vals, b_vals, order):
    """Composed translation on the grid a_vals x b_vals.

    The composed translation is an entire function of (a^2, b^2) for even
    entire factors, so large grids are tabulated on a TABLE_NODES^2
    Chebyshev grid in (a^2, b^2) and interpolated barycentrically.
    """
    if a_vals.size * b_vals.size <= TABLE_NODES ** 2 or a_vals[-1] == 0 or b_vals[-1] == 0:
        return _composed_table(nu, fac, x, a_vals, b_vals, order)
    sa, wa = _cheb_points(a_vals[-1] ** 2)
    sb, wb = _cheb_points(b_vals[-1] ** 2)
    core = _composed_table(nu, fac, x, np.sqrt(sa), np.sqrt(sb), order)
    la = _barycentric_matrix(sa, wa, a_vals ** 2)
    lb = _barycentric_matrix(sb, wb, b_vals ** 2)
    return la @ core @ lb.T


def _direct_separable(gam, f, x, lam, mu, orders):
    rule = sphere_rule(gam.n, gam.entries, orders.sphere)
    pts, w = rule.points, rule.weights
    m = len(rule)
    total = np.zeros((m, m))
    tables = {}
    index = {}
    for i in range(gam.n):
        a_vals, ia = np.unique(lam * pts[:, i], return_inverse=True)
        b_vals, ib = np.unique(mu * pts[:, i], return_inverse=True)
        index[i] = (a_vals, ia.ravel(), b_vals, ib.ravel())
    for c, factors in f.separable_terms:
        prod = np.full((m, m), c)
        for i, fac in enumerate(factors):
            a_vals, ia, b_vals, ib = index[i]
            key = (i, id(fac))
            if key not in tables:
                tables[key] = _pair_table(gam.entries[i], fac, x[i], a_vals, b_vals, orders.shift)
            prod *= tables[key][np.ix_(ia, ib)]
        total += prod
    return float(w @ total @ w)


def _direct_general(gam, f, x, lam, mu, orders):
    n = gam.n
    rule = sphere_rule(n, gam.entries, orders.sphere)
    pts, w = rule.points, rule.weights
    # outer translation nodes; coordinates with x_i = 0 collapse to one node
    outer_p, outer_w = [], []
    for i in range(n):
        if x[i] == 0:
            outer_p.append(np.array([np.nan]))
            outer_w.append(np.ones(1))
        else:
            r = gauss_jacobi(orders.shift, 0.5 * gam.entries[i] - 1.0)
            outer_p.append(r.nodes)
            outer_w.append(shift_constant(gam.entries[i]) * r.weights)
    grids_p = np.meshgrid(*outer_p, indexing="ij")
    grids_w = np.meshgrid(*outer_w, indexing="ij")
    flat_p = np.stack([g.ravel() for g in grids_p], axis=-1)
    flat_w = np.prod(np.stack([g.ravel() for g in grids_w], axis=-1), axis=-1)
    inner_offsets = mu * pts
    total = 0.0
    for k in range(len(rule)):
        a = lam * pts[k]
        acc = 0.0
        for pw, wo in zip(flat_p, flat_w):
            u2 = np.where(np.isnan(pw), a * a, x * x + a * a - 2.0 * x * a * np.nan_to_num(pw))
            u = np.sqrt(np.maximum(u2, 0.0))
            inner = shift_nd(gam, f, u, inner_offsets, orders.shift, factorize=False)
            acc = acc + wo * np.tensordot(w, inner, axes=(0, 0))
        total = total + w[k] * acc
    return total


def iterated_direct(gamma, f: EvenField, x, lam: float, mu: float,
                    orders: Optional[QuadOrders] = None, factorize: bool = True):
    """I(x; lam, mu) as the double part-sphere sum of T^{lam zeta} T^{mu xi} f(x).

    Separable fields use per-coordinate tables of the composed 1-D
    translation; other fields are evaluated pair by pair, which costs
    order^(2(n-1)) translated tensor sums and is practical for small n or
    x = 0. On that path a field with trailing value axes yields an array.
    """
    gam = as_multi_index(gamma)
    orders = _orders(orders)
    x = _point(x, gam.n)
    if lam < 0 or mu < 0:
        raise ValueError("iterated_direct: radii must be nonnegative")
    if factorize and f.separable_terms is not None:
        s = _direct_separable(gam, f, x, float(lam), float(mu), orders)
    else:
        s = _direct_general(gam, f, x, float(lam), float(mu), orders)
    s = s / sphere_constant(gam.n, gam) ** 2
    return float(s) if np.ndim(s) == 0 else s


# ---------------------------------------------------------------------------
# radial routes
# ---------------------------------------------------------------------------

def _mean_profile(gam, f, x, orders, factorize):
    return lambda r: spherical_mean(gam, f, x, r, orders, factorize=factorize)


def iterated_via_translation(gamma, f: EvenField, x, lam: float, mu: float,
                             orders: Optional[QuadOrders] = None, factorize: bool = True) -> float:
    """I(x; lam, mu) as the order-nu translation of r -> M_f(x; r) at (mu, lam)."""
    gam = as_multi_index(gamma)
    orders = _orders(orders)
    x = _point(x, gam.n)
    if lam < 0 or mu < 0:
        raise ValueError("iterated_via_translation: radii must be nonnegative")
    profile = _mean_profile(gam, f, x, orders, factorize)
    return float(shift1d(gam.nu, profile, mu, lam, orders.radial))


def _radial_kernel_integral(gam, f, x, lo, hi, orders, factorize):
    """int_lo^hi ((hi^2 - r^2)(r^2 - lo^2))^e M_f(x; r) r dr, e = (N-3)/2."""
    e = 0.5 * (gam.n + gam.length - 3.0)
    rule = gauss_jacobi(orders.radial, e)
    half = 0.5 * (hi * hi - lo * lo)
    u = 0.5 * (hi * hi + lo * lo) + half * rule.nodes
    m = spherical_mean(gam, f, x, np.sqrt(np.maximum(u, 0.0)), orders, factorize=factorize)
    # r dr = du/2 and the kernel equals half^(2e) (1 - q^2)^e
    return 0.5 * half ** (2.0 * e + 1.0) * float(m @ rule.weights)


def iterated_via_kernel(gamma, f: EvenField, x, lam: float, mu: float,
                        orders: Optional[QuadOrders] = None, factorize: bool = True) -> float:
    """I(x; lam, mu) by the explicit radial kernel over [|lam-mu|, lam+mu]."""
    gam = as_multi_index(gamma)
    orders = _orders(orders)
    x = _point(x, gam.n)
    if not (lam > 0 and mu > 0):
        raise ValueError("iterated_via_kernel: lam and mu must be positive")
    N = gam.n + gam.length
    pref = (
        2.0 * _gamma(0.5 * N) / (np.sqrt(np.pi) * _gamma(0.5 * (N - 1.0)))
        * (2.0 * lam * mu) ** (2.0 - N)
    )
    integral = _radial_kernel_integral(gam, f, x, abs(lam - mu), lam + mu, orders, factorize)
    return float(pref * integral)


def iterated_alpha_beta(gamma, f: EvenField, x, alpha: float, beta: float,
                        orders: Optional[QuadOrders] = None, factorize: bool = True) -> float:
    """I(x; (beta-alpha)/2, (beta+alpha)/2) by the (beta^2-r^2)(r^2-alpha^2) kernel."""
    gam = as_multi_index(gamma)
    orders = _orders(orders)
    x = _point(x, gam.n)
    if not (0 <= alpha < beta):
        raise ValueError("iterated_alpha_beta: need 0 <= alpha < beta")
    N = gam.n + gam.length
    pref = (
        _gamma(0.5 * N) / (np.sqrt(np.pi) * _gamma(0.5 * (N - 1.0)))
        * 2.0 ** (N - 1.0) / (beta * beta - alpha * alpha) ** (N - 2.0)
    )
    return float(pref * _radial_kernel_integral(gam, f, x, alpha, beta, orders, factorize))


_PATHS = {
    "direct": iterated_direct,
    "translation": iterated_via_translation,
    "kernel": iterated_via_kernel,
}


def evaluate_iterated(gamma, f: EvenField, x, lam, mu, path: str,
                      orders: Optional[QuadOrders] = None) -> MeanEvaluation:
    orders = _orders(orders)
    if path == "symmetric":
        value = iterated_alpha_beta(gamma, f, x, abs(lam - mu), lam + mu, orders)
    elif path in _PATHS:
        value = _PATHS[path](gamma, f, x, lam, mu, orders)
    else:
        raise ValueError(f"unknown path {path!r}")
    fx = float(f(np.asarray(x, dtype=float))) if lam == 0 and mu == 0 else None
    return MeanEvaluation(tuple(np.asarray(x, dtype=float).tolist()), float(value), path,
                          orders, lam=float(lam), mu=float(mu), f_at_x=fx)


# ---------------------------------------------------------------------------
# ball / shell identities
# ---------------------------------------------------------------------------

def ball_integral(gamma, h, R: float, order: int) -> float:
    """int over the orthant ball |x| <= R of h(x) x^gamma dx, by Cartesian slices.

    Coordinate k runs over [0, R_k] with R_k^2 = R^2 - x_1^2 - ... - x_{k-1}^2.
    Its Jacobi rule absorbs x_k^gamma_k at 0 and the power (R_k - x_k)^a_k
    that the inner slice volume carries at R_k, with
    a_k = ((n - 1 - k) + gamma_{k+1} + ... + gamma_n) / 2.
    ``h`` maps points of shape (..., n) to values.
    """
    gam = as_multi_index(gamma)
    n = gam.n
    g = gam.array
    pts = np.zeros((1, 0))
    wts = np.ones(1)
    rem = np.full(1, float(R))
    for k in range(n):
        a = 0.5 * ((n - 1 - k) + g[k + 1:].sum())
        rule = gauss_jacobi(order, a, g[k])
        p, w = rule.nodes, rule.weights
        xk = 0.5 * rem[:, None] * (1.0 + p[None, :])
        factor = (0.5 * rem[:, None]) ** (g[k] + 1.0) * w[None, :] * (1.0 - p[None, :]) ** (-a)
        wts = (wts[:, None] * factor).ravel()
        pts = np.concatenate(
            [np.repeat(pts, order, axis=0), xk.reshape(-1, 1)], axis=1
        )
        rem = np.sqrt(np.maximum(rem[:, None] ** 2 - xk ** 2, 0.0)).ravel()
    vals = np.asarray(h(pts), dtype=float)
    return float(vals @ wts)


def _sphere_integral(gam, f, rho, order):
    rule = sphere_rule(gam.n, gam.entries, order)
    rho = np.atleast_1d(np.asarray(rho, dtype=float))
    pts = rho[:, None, None] * rule.points[None]
    return np.asarray(f(pts)) @ rule.weights


def ball_integral_check(gamma, g, f: EvenField, R: float, orders: Optional[QuadOrders] = None):
    """(LHS, RHS) of the ball/shell identity.

    LHS integrates g(|x|) f(x) x^gamma over the orthant ball on Cartesian
    slices; RHS integrates g(rho) rho^(N-1) against the part-sphere
    integral of f(rho .) on a radial Jacobi rule.
    """
    gam = as_multi_index(gamma)
    orders = _orders(orders)
    if not R > 0:
        raise ValueError("ball_integral_check: R must be positive")
    G = radial_callable(g)

    def h(pts):
        return G(np.sqrt(np.sum(pts * pts, axis=-1))) * np.asarray(f(pts))

    lhs = ball_integral(gam, h, R, orders.radial)
    N = gam.n + gam.length
    rho, wr = interval_rule(orders.radial, 0.0, R, 0.0, N - 1.0)
    shell = _sphere_integral(gam, f, rho, orders.sphere)
    rhs = float(np.sum(wr * G(rho) * shell))
    return lhs, rhs


def ball_derivative_check(gamma, f: EvenField, R: float, orders: Optional[QuadOrders] = None,
                          step: float = 1e-2):
    """(sphere integral of f(R .), R^(1-N) d/dR of the ball integral).

    The derivative is a five-point central difference of the Cartesian
    ball integral with relative step ``step``.
    """
    gam = as_multi_index(gamma)
    orders = _orders(orders)
    N = gam.n + gam.length
    hstep = step * R

    def ball(radius):
        return ball_integral(gam, lambda p: np.asarray(f(p)), radius, orders.radial)

    deriv = (
        -ball(R + 2 * hstep) + 8 * ball(R + hstep) - 8 * ball(R - hstep) + ball(R - 2 * hstep)
    ) / (12.0 * hstep)
    lhs = float(_sphere_integral(gam, f, R, orders.sphere)[0])
    return lhs, float(R ** (1.0 - N) * deriv)


def plane_wave_sphere_integral(gamma, g, xi, orders: Optional[QuadOrders] = None):
    """Sphere integral of the Poisson-averaged plane wave, and its 1-D reduction.

    Returns ``(lhs, jacobi)`` where ``lhs`` is the part-sphere integral over
    x of the Poisson average (in xi) of g(<xi, x>) and ``jacobi`` is
    int_{-1}^{1} g(|xi| p) (1 - p^2)^((N-3)/2) dp. Their ratio is the
    constant linking the two sides.
    """
    gam = as_multi_index(gamma)
    orders = _orders(orders)
    xi = _point(xi, gam.n)
    G = radial_callable(g)
    rule = sphere_rule(gam.n, gam.entries, orders.sphere)
    ang = [gauss_jacobi(orders.shift, 0.5 * gi - 1.0) for gi in gam.entries]
    cw = np.ones(1)
    for gi, r in zip(gam.entries, ang):
        cw = np.multiply.outer(cw, shift_constant(gi) * r.weights).ravel()
    grids = np.meshgrid(*[r.nodes for r in ang], indexing="ij")
    cosines = np.stack([gr.ravel() for gr in grids], axis=-1)  # (q, n)
    lhs = 0.0
    step = max(1, _CHUNK // cosines.shape[0])
    for s in range(0, len(rule), step):
        arg = (rule.points[s:s + step, None, :] * xi * cosines[None]).sum(axis=-1)
        lhs += float(rule.weights[s:s + step] @ (G(arg) @ cw))
    N = gam.n + gam.length
    pr = gauss_jacobi(orders.radial, 0.5 * (N - 3.0))
    jac = float(G(np.linalg.norm(xi) * pr.nodes) @ pr.weights)
    return lhs, jac
