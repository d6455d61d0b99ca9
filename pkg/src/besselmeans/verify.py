"""Verification suite: every identity computed two independent ways.

Each check yields a flat ``CheckRecord``. ``rel_diff`` is ``abs_diff / scale``
where ``scale`` is the natural magnitude of the compared quantity (stated per
check: the value itself, 1 + |value|, or the sup-norm of a sampled curve).
A record passes iff ``rel_diff <= tolerance``.

Suites are keyed by criterion id ("1".."8") plus "inv" for the per-module
invariants. All randomness is seeded, so reports are byte-for-byte
reproducible.
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass, replace
from typing import Callable, Dict, List, Optional

import numpy as np

from .config import RunConfig
from .fields import EvenField, SeparableField, builtin_field, default_xi, gaussian, one
from .hankel import (
    GridTable,
    fbt_forward,
    fbt_inverse,
    gaussian_image_constant,
    grid_transform,
    inversion_constant,
    transformed_field,
)
from .means import (
    ball_derivative_check,
    ball_integral_check,
    iterated_alpha_beta,
    iterated_direct,
    iterated_via_kernel,
    iterated_via_translation,
    plane_wave_sphere_integral,
    printed_poisson_constant,
    sphere_constant,
    spherical_mean,
)
from .quadrature import QuadOrders, gauss_jacobi, gauss_legendre, interval_rule, sphere_rule
from .reconstruct import (
    EwaldProblem,
    ewald_constant,
    make_phantom,
    reconstruct_double_sphere,
    reconstruct_radial,
    reconstruction_constant,
)
from .special import bessel_j, gamma as gamma_fn, j_gamma, normalized_j
from .translation import poisson, shift1d, shift1d_kernel, shift_nd

__all__ = [
    "CheckRecord",
    "VerificationReport",
    "SUITES",
    "run_suite",
    "theorem_one_gammas",
    "RAY_POINTS",
]

RAY_POINTS = 13
_WEIGHT_SET = (0.5, 1.0, 2.0)
_FIELDS = ("gaussian", "j_gamma", "poly_gaussian")


@dataclass(frozen=True)
class CheckRecord:
    check_id: str
    criterion: str
    anchor: str
    lhs: float
    rhs: float
    abs_diff: float
    rel_diff: float
    tolerance: float
    passed: bool


def _record(check_id, criterion, anchor, lhs, rhs, tol, scale=None, rel=None) -> CheckRecord:
    lhs, rhs = float(lhs), float(rhs)
    diff = abs(lhs - rhs)
    if rel is None:
        scale = abs(rhs) if scale is None else float(scale)
        rel = diff / scale if scale > 0 else (0.0 if diff == 0 else float("inf"))
    rel = float(rel)
    return CheckRecord(check_id, criterion, anchor, lhs, rhs, diff, rel, float(tol), bool(rel <= tol))


def _worst(check_id, criterion, anchor, lhs, rhs, tol, scale=None):
    """One record for the worst point of an array comparison.

    ``scale`` is a scalar (e.g. a sup-norm) or None for pointwise relative.
    """
    lhs = np.asarray(lhs, dtype=float).ravel()
    rhs = np.asarray(rhs, dtype=float).ravel()
    denom = np.abs(rhs) if scale is None else np.full(rhs.shape, float(scale))
    rel = np.abs(lhs - rhs) / denom
    k = int(np.argmax(rel))
    return _record(check_id, criterion, anchor, lhs[k], rhs[k], tol, scale=denom[k])


def _gtag(g) -> str:
    return "(" + ",".join(f"{v:g}" for v in g) + ")"


def theorem_one_gammas(n: int):
    """Cyclic rotations of (0.5, 1, 2), each truncated to n entries."""
    return [tuple(_WEIGHT_SET[(s + i) % 3] for i in range(n)) for s in range(3)]


# ---------------------------------------------------------------------------
# criterion 1: three routes to the iterated mean
# ---------------------------------------------------------------------------

def _random_tuples(n, seed, count=10):
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        x = 1.5 - rng.uniform(0.0, 1.5, n)  # in (0, 1.5]
        lam, mu = 3.0 - rng.uniform(0.0, 2.9, 2)  # in (0.1, 3]
        out.append((x, float(lam), float(mu)))
    return out


def criterion_1(cfg: RunConfig) -> List[CheckRecord]:
    recs = []
    pairs = (
        ("direct-translation", "iterated mean: double sphere sum = radial translation of the mean", 1e-6),
        ("direct-kernel", "iterated mean: double sphere sum = explicit radial kernel integral", 1e-6),
        ("translation-kernel", "iterated mean: radial translation = explicit radial kernel integral", 1e-8),
    )
    for n in (1, 2, 3):
        for gi, g in enumerate(theorem_one_gammas(n)):
            tuples = _random_tuples(n, 1000 + 10 * n + gi)
            for name in _FIELDS:
                f = builtin_field(name, g)
                for k, (x, lam, mu) in enumerate(tuples):
                    vals = {
                        "direct": iterated_direct(g, f, x, lam, mu, cfg.orders),
                        "translation": iterated_via_translation(g, f, x, lam, mu, cfg.orders),
                        "kernel": iterated_via_kernel(g, f, x, lam, mu, cfg.orders),
                    }
                    for tag, anchor, tol in pairs:
                        a, b = tag.split("-")
                        recs.append(_record(
                            f"c1/n{n}/g{_gtag(g)}/{name}/t{k}/{tag}", "1", anchor,
                            vals[a], vals[b], tol, scale=1.0 + abs(vals[b]),
                        ))
    return recs


# ---------------------------------------------------------------------------
# criterion 2: Bessel eigenfunction oracles
# ---------------------------------------------------------------------------

def criterion_2(cfg: RunConfig) -> List[CheckRecord]:
    recs = []
    radii = np.linspace(0.5, 8.0, 16)
    for n in (1, 2, 3):
        for g in theorem_one_gammas(n):
            xi = default_xi(n)
            x = np.linspace(0.3, 1.2, n)
            f = builtin_field("j_gamma", g, xi)
            lhs = spherical_mean(g, f, x, radii, cfg.orders)
            N = n + sum(g)
            rhs = j_gamma(g, x, xi) * normalized_j(0.5 * (N - 2.0), radii)
            recs.append(_worst(
                f"c2/mean/n{n}/g{_gtag(g)}", "2",
                "spherical mean of j_gamma(., xi), |xi|=1: j_gamma(x, xi) j_{(n+|gamma|-2)/2}(r)",
                lhs, rhs, 1e-8, scale=np.max(np.abs(rhs)),
            ))
    grid = np.linspace(0.5, 8.0, 16)
    lam, mu = np.meshgrid(grid, grid, indexing="ij")
    for nu in (1.0, 2.0, 3.0, 4.4):
        om = 0.5 * (nu - 1.0)

        def g(t, om=om):
            return normalized_j(om, t)

        lhs = shift1d(nu, g, lam, mu, cfg.orders.shift)
        rhs = normalized_j(om, lam) * normalized_j(om, mu)
        recs.append(_worst(
            f"c2/product/nu{nu:g}", "2",
            "translation product formula: T j_{(nu-1)/2}(mu) = j_{(nu-1)/2}(mu) j_{(nu-1)/2}(lam)",
            lhs, rhs, 1e-8, scale=np.max(np.abs(rhs)),
        ))
    return recs


# ---------------------------------------------------------------------------
# criterion 3: angular form vs kernel form of the translation
# ---------------------------------------------------------------------------

def criterion_3(cfg: RunConfig) -> List[CheckRecord]:
    recs = []
    grid = 0.1 + 0.49 * np.arange(1, 11)  # ten points in (0.1, 5]
    s, t = np.meshgrid(grid, grid, indexing="ij")
    profiles = {
        "gauss": lambda z: np.exp(-np.asarray(z) ** 2),
        "cos": lambda z: np.cos(np.asarray(z)),
    }
    for nu in (0.5, 1.0, 2.0, 3.7):
        for pname, prof in profiles.items():
            a = shift1d(nu, prof, s, t, cfg.orders.shift)
            b = shift1d_kernel(nu, prof, s, t, cfg.orders.shift)
            recs.append(_worst(
                f"c3/nu{nu:g}/{pname}", "3",
                "translation: angular integral = kernel integral over [|s-t|, s+t]",
                b, a, 1e-9, scale=max(1.0, float(np.max(np.abs(a)))),
            ))
    return recs


# ---------------------------------------------------------------------------
# criterion 4: part-sphere measure
# ---------------------------------------------------------------------------

def criterion_4(cfg: RunConfig) -> List[CheckRecord]:
    rng = np.random.default_rng(4)
    recs = []
    for k in range(20):
        n = int(rng.integers(1, 4))
        g = tuple(float(v) for v in rng.uniform(0.2, 3.0, n))
        mass = sphere_rule(n, g, cfg.orders.sphere).mass
        recs.append(_record(
            f"c4/case{k}/n{n}", "4", "part-sphere measure: rule mass = closed-form constant",
            mass, sphere_constant(n, g), 1e-10,
        ))
    return recs


# ---------------------------------------------------------------------------
# criterion 5: transform pair
# ---------------------------------------------------------------------------

def _ball_points(n, radius, count):
    axis = np.linspace(0.0, radius, count)
    grids = np.meshgrid(*([axis] * n), indexing="ij")
    pts = np.stack([gr.ravel() for gr in grids], axis=-1)
    return pts[np.linalg.norm(pts, axis=-1) <= radius + 1e-12]


def _all_gammas(n):
    grids = np.meshgrid(*([np.array(_WEIGHT_SET)] * n), indexing="ij")
    return [tuple(float(v) for v in row) for row in np.stack([gr.ravel() for gr in grids], axis=-1)]


def criterion_5(cfg: RunConfig) -> List[CheckRecord]:
    recs = []
    R, order = cfg.rtrunc, cfg.orders.transform
    for n in (1, 2):
        xs = _ball_points(n, 3.0, 31 if n == 1 else 16)
        xis = _ball_points(n, 5.0, 26 if n == 1 else 16)
        for g in _all_gammas(n):
            for name in ("gaussian", "poly_gaussian"):
                f = builtin_field(name, g)
                image = transformed_field(g, f, "forward", R, order)
                back = transformed_field(g, image, "inverse", R, order)
                ref = f(xs)
                recs.append(_worst(
                    f"c5/roundtrip/n{n}/g{_gtag(g)}/{name}", "5",
                    "inverse transform of the forward transform returns the field",
                    back(xs), ref, 1e-6, scale=np.max(np.abs(ref)),
                ))
            closed = np.exp(-0.5 * np.sum(xis ** 2, axis=-1)) * gaussian_image_constant(g)
            recs.append(_worst(
                f"c5/gaussian/n{n}/g{_gtag(g)}", "5",
                "transform of exp(-|x|^2/2) = exp(-|xi|^2/2) prod 2^((g-1)/2) Gamma((g+1)/2)",
                fbt_forward(g, gaussian(n), xis, R, order), closed, 1e-8,
            ))
    for g, count in (((1.0,), 121), ((0.5, 2.0), 61)):
        n = len(g)
        axis = np.linspace(0.0, 10.0, count)
        table = GridTable.sample(g, gaussian(n), [axis] * n)
        fwd = grid_transform(g, table, "forward", [axis] * n, order)
        back = grid_transform(g, fwd, "inverse", [axis] * n, order)
        recs.append(_worst(
            f"c5/grid-roundtrip/n{n}/g{_gtag(g)}", "5",
            "sampled-table transform round trip returns the samples",
            back.values, table.values, 1e-6, scale=np.max(np.abs(table.values)),
        ))
    return recs


# ---------------------------------------------------------------------------
# criterion 6: reconstruction from Ewald-ball data
# ---------------------------------------------------------------------------

def ray(n, count=RAY_POINTS, length=3.0):
    ys = np.zeros((count, n))
    ys[:, 0] = np.linspace(0.0, length, count)
    return ys


def _both_paths(problem, ys, orders):
    dbl = reconstruct_double_sphere(problem, ys, orders)
    rad = reconstruct_radial(problem, ys, orders)
    return dbl, rad


def criterion_6(cfg: RunConfig) -> List[CheckRecord]:
    recs = []
    problem, truth_field = make_phantom(cfg.n, cfg.gamma, cfg.lam, cfg.delta,
                                        transform_order=2 * cfg.orders.transform,
                                        allow_singular=cfg.allow_singular)
    ys = ray(cfg.n)
    truth = truth_field(ys)
    sup = float(np.max(np.abs(truth)))
    dbl, rad = _both_paths(problem, ys, cfg.orders)
    anchor = "reconstruction from Ewald-ball data via the iterated mean at (0; lam, lam)"
    recs.append(_worst("c6/double-sphere/vs-truth", "6", anchor + ": double sphere sum vs inverse transform",
                       dbl, truth, 1e-2, scale=sup))
    recs.append(_worst("c6/radial/vs-truth", "6", anchor + ": radial integral vs inverse transform",
                       rad, truth, 1e-2, scale=sup))
    recs.append(_worst("c6/paths", "6", anchor + ": double sphere sum = radial integral",
                       dbl, rad, 1e-6, scale=sup))
    errors = {}
    for k in (12, 24, 48, 96):
        o = QuadOrders(sphere=k, shift=k, radial=k, transform=cfg.orders.transform)
        d, r = _both_paths(problem, ys, o)
        errors[k] = (np.max(np.abs(d - truth)) / sup, np.max(np.abs(r - truth)) / sup)
    for k in (12, 24, 48):
        for idx, path in enumerate(("double-sphere", "radial")):
            e_k, e_2k = errors[k][idx], errors[2 * k][idx]
            ratio = e_2k / e_k if e_k > 0 else (0.0 if e_2k == 0 else float("inf"))
            recs.append(_record(
                f"c6/convergence/{path}/k{k}", "6",
                anchor + f": error at order {2 * k} <= error at order {k}",
                e_2k, e_k, 1.0, rel=ratio,
            ))
    return recs


# ---------------------------------------------------------------------------
# criterion 7: degenerate cases
# ---------------------------------------------------------------------------

def criterion_7(cfg: RunConfig) -> List[CheckRecord]:
    recs = []
    tol = 1e-12
    rng = np.random.default_rng(7)
    for n in (1, 2, 3):
        for g in theorem_one_gammas(n)[:2]:
            x = rng.uniform(0.1, 1.5, n)
            lam = float(rng.uniform(0.5, 2.5))
            tag = f"n{n}/g{_gtag(g)}"
            for name in ("gaussian", "poly_gaussian"):
                f = builtin_field(name, g)
                fx = f(x)
                sc = 1.0 + abs(fx)
                recs.append(_record(f"c7/mean-r0/{tag}/{name}", "7", "mean at radius 0 is the identity",
                                    spherical_mean(g, f, x, 0.0, cfg.orders), fx, tol, scale=sc))
                m_lam = spherical_mean(g, f, x, lam, cfg.orders)
                recs.append(_record(f"c7/iterated-mu0/{tag}/{name}", "7", "I(x; lam, 0) = M_lam f(x)",
                                    iterated_direct(g, f, x, lam, 0.0, cfg.orders), m_lam, tol,
                                    scale=1.0 + abs(m_lam)))
                recs.append(_record(f"c7/iterated-00/{tag}/{name}", "7", "I(x; 0, 0) = f(x)",
                                    iterated_direct(g, f, x, 0.0, 0.0, cfg.orders), fx, tol, scale=sc))
                recs.append(_record(f"c7/shift-zero/{tag}/{name}", "7", "translation by a zero offset is the identity",
                                    shift_nd(g, f, x, np.zeros(n), cfg.orders.shift), fx, tol, scale=sc))
            recs.append(_record(f"c7/poisson-one/{tag}", "7", "Poisson operator maps 1 to 1",
                                poisson(g, one(n), x, cfg.orders.shift), 1.0, tol, scale=1.0))
            recs.append(_record(f"c7/mean-one/{tag}", "7", "mean of the constant 1 is 1",
                                spherical_mean(g, one(n), x, lam, cfg.orders), 1.0, tol, scale=1.0))
    return recs


# ---------------------------------------------------------------------------
# criterion 8: ball / shell identity
# ---------------------------------------------------------------------------

def criterion_8(cfg: RunConfig) -> List[CheckRecord]:
    recs = []
    gprof = lambda r: np.exp(-0.5 * np.asarray(r) ** 2)  # noqa: E731
    for n in (1, 2, 3):
        for g in theorem_one_gammas(n)[:2]:
            f = gaussian(n, 0.8)
            for R in (1.0, 2.5):
                tag = f"n{n}/g{_gtag(g)}/R{R:g}"
                lhs, rhs = ball_integral_check(g, gprof, f, R, cfg.orders)
                recs.append(_record(f"c8/ball-shell/{tag}", "8",
                                    "ball integral = radial integral of part-sphere integrals",
                                    lhs, rhs, 1e-8))
                lhs, rhs = ball_derivative_check(g, f, R, cfg.orders)
                recs.append(_record(f"c8/derivative/{tag}", "8",
                                    "part-sphere integral = R^(1-N) d/dR of the ball integral",
                                    lhs, rhs, 1e-6))
            N = n + sum(g)
            lhs, rhs = ball_integral_check(g, lambda r: np.ones_like(np.asarray(r)), one(n), 1.7, cfg.orders)
            closed = sphere_constant(n, g) * 1.7 ** N / N
            recs.append(_record(f"c8/unit/n{n}/g{_gtag(g)}", "8",
                                "ball integral of x^gamma = |S| R^N / N", lhs, closed, 1e-8))
    return recs


# ---------------------------------------------------------------------------
# per-module invariants
# ---------------------------------------------------------------------------

def _inv_special(cfg):
    recs = []
    for x, v in ((5.0, 24.0), (0.5, np.sqrt(np.pi)), (1.5, 0.5 * np.sqrt(np.pi))):
        recs.append(_record(f"inv/special/gamma{x:g}", "inv", "Gamma function values", gamma_fn(x), v, 1e-12))
    recs.append(_record("inv/special/J1(1)", "inv", "Bessel J_1(1)", bessel_j(1.0, 1.0), 0.44005058574493355, 1e-10))
    recs.append(_record("inv/special/j1(2)", "inv", "normalized Bessel j_1(2)", normalized_j(1.0, 2.0),
                        0.5767248077568734, 1e-10))
    t = np.linspace(0.0, 50.0, 10_000)
    for om in (-0.25, 0.0, 0.5, 1.0, 2.5):
        recs.append(_record(f"inv/special/j-at-0/om{om:g}", "inv", "j_omega(0) = 1", normalized_j(om, 0.0), 1.0, 0.0))
        if om >= 0:
            peak = float(np.max(np.abs(normalized_j(om, t))))
            recs.append(_record(f"inv/special/bound/om{om:g}", "inv", "|j_omega| <= 1 for omega >= 0",
                                peak, 1.0, 0.0, rel=max(0.0, peak - 1.0)))
        tt = np.linspace(0.1, 50.0, 500)
        lhs = normalized_j(om, tt) * tt ** om / (gamma_fn(om + 1.0) * 2.0 ** om)
        recs.append(_worst(f"inv/special/bessel-consistency/om{om:g}", "inv",
                           "j_omega(t) t^omega / (Gamma(omega+1) 2^omega) = J_omega(t)",
                           lhs, bessel_j(om, tt), 1e-10, scale=np.max(np.abs(bessel_j(om, tt)))))
    return recs


def _inv_quadrature(cfg):
    recs = []
    recs.append(_record("inv/quadrature/legendre-p6", "inv", "Gauss-Legendre exactness",
                        gauss_legendre(4).integrate(lambda p: p ** 6), 2.0 / 7.0, 1e-14))
    recs.append(_record("inv/quadrature/jacobi-mass", "inv", "Jacobi(1/2) mass = pi/2",
                        gauss_jacobi(cfg.orders.shift, 0.5).mass, 0.5 * np.pi, 1e-12))
    recs.append(_record("inv/quadrature/chebyshev-moment", "inv", "int p^2 (1-p^2)^(-1/2) dp = pi/2",
                        gauss_jacobi(2, -0.5).integrate(lambda p: p ** 2), 0.5 * np.pi, 1e-12))
    for n, g in ((2, (1.0, 1.0)), (2, (2.0, 2.0)), (3, (0.5, 1.0, 2.0))):
        f = lambda p: np.exp(-np.sum(p ** 2 * np.arange(1, p.shape[-1] + 1), axis=-1))  # noqa: E731
        coarse = sphere_rule(n, g, cfg.orders.sphere)
        fine = sphere_rule(n, g, 2 * cfg.orders.sphere)
        recs.append(_record(f"inv/quadrature/refine/n{n}/g{_gtag(g)}", "inv",
                            "part-sphere rule refinement stability",
                            float(f(coarse.points) @ coarse.weights), float(f(fine.points) @ fine.weights), 1e-10))
    return recs


def _inv_translation(cfg):
    recs = []
    o = cfg.orders.shift
    rng = np.random.default_rng(11)
    prof = lambda z: np.exp(-0.3 * np.asarray(z) ** 2) * np.cos(np.asarray(z))  # noqa: E731
    for k in range(10):
        nu = float(rng.uniform(0.3, 5.0))
        s, t = rng.uniform(0.0, 4.0, 2)
        recs.append(_record(f"inv/translation/identity/{k}", "inv", "translation by 0 is the identity",
                            shift1d(nu, prof, s, 0.0, o), prof(s), 1e-12, scale=1.0))
        recs.append(_record(f"inv/translation/symmetry/{k}", "inv", "translation is symmetric in (s, t)",
                            shift1d(nu, prof, s, t, o), shift1d(nu, prof, t, s, o), 1e-11, scale=1.0))
        a, b = rng.uniform(-2, 2, 2)
        g2 = lambda z: np.asarray(z) ** 2  # noqa: E731
        lin = shift1d(nu, lambda z: a * prof(z) + b * g2(z), s, t, o)
        recs.append(_record(f"inv/translation/linearity/{k}", "inv", "translation is linear",
                            lin, a * shift1d(nu, prof, s, t, o) + b * shift1d(nu, g2, s, t, o), 1e-12,
                            scale=1.0 + abs(lin)))
        pos = shift1d(nu, lambda z: np.exp(-np.asarray(z) ** 2), s, t, o)
        recs.append(_record(f"inv/translation/positivity/{k}", "inv", "translation of a positive g is positive",
                            pos, 0.0, 0.0, rel=0.0 if pos >= 0 else 1.0))
        recs.append(_record(f"inv/translation/s2t2/{k}", "inv", "translation of z^2 is s^2 + t^2",
                            shift1d(nu, g2, s, t, o), s * s + t * t, 1e-12, scale=1.0 + s * s + t * t))
    recs.append(_record("inv/translation/poisson-cos", "inv", "Poisson average of cos at x=1, gamma=1 is J_0(1)",
                        poisson((1.0,), SeparableField(1, [(1.0, (np.cos,))]), [1.0], o), 0.7651976865579666, 1e-10))
    for n, g in ((1, (1.0,)), (2, (0.5, 2.0))):
        y = np.linspace(0.7, 1.1, n)
        f, h = gaussian(n, 1.0), gaussian(n, 0.7)
        rules = [interval_rule(64, 0.0, 8.0, 0.0, gi) for gi in g]
        grids = np.meshgrid(*[r[0] for r in rules], indexing="ij")
        wts = np.ones(1)
        for r in rules:
            wts = np.multiply.outer(wts, r[1]).ravel()
        pts = np.stack([gr.ravel() for gr in grids], axis=-1)
        lhs = float(np.sum(wts * shift_nd(g, f, y, pts, o) * h(pts)))
        rhs = float(np.sum(wts * f(pts) * shift_nd(g, h, y, pts, o)))
        recs.append(_record(f"inv/translation/self-adjoint/n{n}", "inv",
                            "translation is self-adjoint for the x^gamma measure", lhs, rhs, 1e-6))
        x = np.linspace(0.4, 0.9, n)
        f_sep = builtin_field("poly_gaussian", g)
        recs.append(_record(f"inv/translation/factorized/n{n}", "inv",
                            "factorized and explicit tensor translation agree",
                            shift_nd(g, f_sep, x, y, o), shift_nd(g, f_sep, x, y, o, factorize=False), 1e-13,
                            scale=1.0))
    return recs


def _inv_means(cfg):
    recs = []
    rng = np.random.default_rng(12)
    for n, g in ((2, (1.0, 1.0)), (3, (0.5, 1.0, 2.0))):
        f = builtin_field("gaussian", g)
        x = rng.uniform(0.2, 1.2, n)
        lam, mu = rng.uniform(0.2, 2.5, 2)
        for path, fn in (("direct", iterated_direct), ("translation", iterated_via_translation),
                         ("kernel", iterated_via_kernel)):
            a, b = fn(g, f, x, lam, mu, cfg.orders), fn(g, f, x, mu, lam, cfg.orders)
            recs.append(_record(f"inv/means/symmetry/{path}/n{n}", "inv", "I(x; lam, mu) = I(x; mu, lam)",
                                a, b, 1e-9, scale=1.0 + abs(b)))
        for k in range(3):
            alpha, beta = np.sort(rng.uniform(0.0, 4.0, 2))
            lhs = iterated_alpha_beta(g, f, x, alpha, beta, cfg.orders)
            rhs = iterated_via_kernel(g, f, x, 0.5 * (beta - alpha), 0.5 * (beta + alpha), cfg.orders)
            recs.append(_record(f"inv/means/alpha-beta/n{n}/{k}", "inv",
                                "(alpha, beta) kernel = (lam, mu) kernel under the substitution",
                                lhs, rhs, 1e-9, scale=1.0 + abs(rhs)))
    profiles = (
        ("cos", np.cos),
        ("gauss", lambda t: np.exp(-np.asarray(t) ** 2)),
        ("lorentz", lambda t: 1.0 / (1.0 + np.asarray(t) ** 2)),
        ("exp", np.exp),
        ("poly", lambda t: 1.0 + np.asarray(t) ** 2 - 0.1 * np.asarray(t) ** 4),
    )
    for n, g in ((2, (1.0, 1.0)), (2, (0.5, 2.0)), (3, (0.5, 1.0, 2.0))):
        xi = np.linspace(0.6, 1.3, n)
        target = printed_poisson_constant(g)
        for pname, prof in profiles:
            lhs, jac = plane_wave_sphere_integral(g, prof, xi, cfg.orders)
            recs.append(_record(f"inv/means/plane-wave/n{n}/g{_gtag(g)}/{pname}", "inv",
                                "sphere integral of the Poisson-averaged plane wave / 1-D Jacobi integral "
                                "= prod Gamma((g+1)/2) / (sqrt(pi) 2^(n-1) Gamma((|g|+n-1)/2))",
                                lhs / jac, target, 1e-8))
    return recs


def _inv_hankel(cfg):
    recs = []
    R, order = cfg.rtrunc, cfg.orders.transform
    a = lambda t: np.exp(-0.5 * np.asarray(t) ** 2)  # noqa: E731
    b = lambda t: (1.0 + np.asarray(t) ** 2) * np.exp(-np.asarray(t) ** 2)  # noqa: E731
    g = (0.5, 2.0)
    f = SeparableField(2, [(1.0, (a, b))])
    f_swapped = SeparableField(2, [(1.0, (b, a))])
    general = EvenField(2, lambda p: f(p))
    xi = np.array([[0.3, 1.7], [2.2, 0.4], [1.0, 1.0]])
    recs.append(_worst("inv/hankel/permutation", "inv", "transform is invariant under coordinate permutation",
                       fbt_forward(g, f, xi, R, order), fbt_forward(g[::-1], f_swapped, xi[:, ::-1], R, order),
                       1e-12))
    recs.append(_worst("inv/hankel/separable-vs-tensor", "inv", "factorized and tensor transforms agree",
                       fbt_forward(g, general, xi, R, order), fbt_forward(g, f, xi, R, order), 1e-12))
    mass = fbt_forward(g, f, np.zeros(2), R, order)
    rules = [interval_rule(order, 0.0, R, 0.0, gi) for gi in g]
    direct = float((rules[0][1] @ a(rules[0][0])) * (rules[1][1] @ b(rules[1][0])))
    recs.append(_record("inv/hankel/zero-frequency", "inv", "transform at 0 is the weighted mass",
                        mass, direct, 1e-13))
    closed = gaussian_image_constant(g) ** 2 * inversion_constant(g)
    recs.append(_record("inv/hankel/constants", "inv", "inversion constant undoes the Gaussian image constant twice",
                        closed, 1.0, 1e-13))
    return recs


def _inv_reconstruct(cfg):
    recs = []
    o = cfg.orders
    recs.append(_record("inv/reconstruct/ewald-constant/n2", "inv", "printed Ewald constant, n=2, gamma=(1,1), lam=1",
                        ewald_constant(2, (1.0, 1.0), 1.0), 4.0 * np.pi, 1e-12))
    recs.append(_record("inv/reconstruct/ewald-constant/n1", "inv", "printed Ewald constant, n=1, gamma=(2), lam=1",
                        ewald_constant(1, (2.0,), 1.0), 4.0 / np.pi, 1e-12))
    for n, g, lam in ((2, (1.0, 1.0), 1.0), (1, (2.0,), 1.5), (2, (0.5, 2.0), 2.0), (3, (1.0, 1.0, 1.0), 1.0)):
        N = n + sum(g)
        s = sphere_constant(n, g)
        kernel = 2.0 * gamma_fn(0.5 * N) / (np.sqrt(np.pi) * gamma_fn(0.5 * (N - 1.0))) * (2 * lam * lam) ** (2 - N)
        derived = inversion_constant(g) / (s * kernel)
        recs.append(_record(f"inv/reconstruct/constant/n{n}/g{_gtag(g)}", "inv",
                            "reconstruction constant = inversion constant / (|S| kernel prefactor)",
                            reconstruction_constant(n, g, lam), derived, 1e-12))
    cases = [(1, (2.0,)), (1, (2.5,)), (2, (1.0, 1.0)), (2, (0.5, 2.0))]
    for n, g in cases:
        for lam in (1.0, 2.0):
            problem, truth = make_phantom(n, g, lam, 0.2, transform_order=2 * o.transform)
            ys = ray(n, 4)
            # in 1-D the |x| factor puts a square-root endpoint in the cos-angle
            # variable (error ~ k^-3); one translation is cheap, so resolve it
            do = o if n > 1 else replace(o, shift=4 * o.shift)
            dbl = reconstruct_double_sphere(problem, ys, do)
            rad = reconstruct_radial(problem, ys, o)
            inv = fbt_inverse(g, problem.fhat, ys, problem.rho, o.transform)
            sup = float(np.max(np.abs(rad)))
            tag = f"n{n}/g{_gtag(g)}/lam{lam:g}"
            recs.append(_worst(f"inv/reconstruct/closure/{tag}", "inv",
                               "double sphere reconstruction = radial reconstruction", dbl, rad, 1e-6, scale=sup))
            recs.append(_worst(f"inv/reconstruct/oracle/{tag}", "inv",
                               "radial reconstruction = truncated inverse transform", rad, inv, 1e-6, scale=sup))
    g = (1.0, 1.0)
    p1, _ = make_phantom(2, g, 1.0, 0.2)
    p2, _ = make_phantom(2, g, 1.0, 0.2, amplitude=2.0, sharpness=0.5)
    a, b = 0.7, -1.3
    combo = EwaldProblem(g, 1.0, a * p1.fhat + b * p2.fhat, 0.2)
    ys = ray(2, 4)
    for name, fn in (("double-sphere", reconstruct_double_sphere), ("radial", reconstruct_radial)):
        lhs = fn(combo, ys, o)
        rhs = a * fn(p1, ys, o) + b * fn(p2, ys, o)
        recs.append(_worst(f"inv/reconstruct/linearity/{name}", "inv", "reconstruction is linear in the data",
                           lhs, rhs, 1e-8, scale=np.max(np.abs(rhs))))
    return recs


def invariants(cfg: RunConfig) -> List[CheckRecord]:
    out = []
    for fn in (_inv_special, _inv_quadrature, _inv_translation, _inv_means, _inv_hankel, _inv_reconstruct):
        out.extend(fn(cfg))
    return out


SUITES: Dict[str, Callable[[RunConfig], List[CheckRecord]]] = {
    "1": criterion_1,
    "2": criterion_2,
    "3": criterion_3,
    "4": criterion_4,
    "5": criterion_5,
    "6": criterion_6,
    "7": criterion_7,
    "8": criterion_8,
    "inv": invariants,
}


# ---------------------------------------------------------------------------
# report
# ---------------------------------------------------------------------------

_FIELDS_ORDER = ("check_id", "criterion", "anchor", "lhs", "rhs", "abs_diff", "rel_diff", "tolerance", "passed")


@dataclass(frozen=True)
class VerificationReport:
    records: tuple
    config: dict

    @property
    def n_passed(self) -> int:
        return sum(r.passed for r in self.records)

    @property
    def n_failed(self) -> int:
        return len(self.records) - self.n_passed

    @property
    def ok(self) -> bool:
        return self.n_failed == 0 and len(self.records) > 0

    def summary(self) -> dict:
        return {"checks": len(self.records), "passed": self.n_passed, "failed": self.n_failed}

    def to_json(self) -> str:
        doc = {f"config_{k}": v for k, v in self.config.items()}
        doc.update({f"summary_{k}": v for k, v in self.summary().items()})
        doc["checks"] = [asdict(r) for r in self.records]
        return json.dumps(doc, indent=1, allow_nan=True) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        for k, v in self.config.items():
            buf.write(f"# {k}: {v}\n")
        for k, v in self.summary().items():
            buf.write(f"# {k}: {v}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(_FIELDS_ORDER)
        for r in self.records:
            row = asdict(r)
            w.writerow([
                f"{row[k]:.17g}" if isinstance(row[k], float) else row[k] for k in _FIELDS_ORDER
            ])
        return buf.getvalue()


def apply_tolerance(records, tol: Optional[float]):
    """Replace every tolerance by ``tol`` (None keeps the built-in ones)."""
    if tol is None:
        return list(records)
    return [CheckRecord(r.check_id, r.criterion, r.anchor, r.lhs, r.rhs, r.abs_diff, r.rel_diff,
                        float(tol), bool(r.rel_diff <= tol)) for r in records]


def run_suite(cfg: RunConfig, criteria=None) -> VerificationReport:
    keys = list(SUITES) if criteria is None else list(criteria)
    records = []
    for key in keys:
        records.extend(SUITES[key](cfg))
    return VerificationReport(tuple(apply_tolerance(records, cfg.tol)), cfg.echo())
