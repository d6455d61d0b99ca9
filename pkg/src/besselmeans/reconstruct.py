"""Recovering F from Fourier-Bessel data supported inside the Ewald ball |x| < 2 lam.

With N = n + |gamma| and e = (N - 3)/2, define for each output point y

    f_y(x) = |x| Fhat(x) j_gamma(x, y) / (4 lam^2 - |x|^2)^e.

Then F(y) = C |S|^2 I_{f_y}(0; lam, lam), where I is the iterated weighted
spherical mean and C = ``reconstruction_constant``.
``reconstruct_double_sphere`` evaluates I by the double part-sphere sum of
translations; ``reconstruct_radial`` by the radial kernel integral, with the
mean at the origin taken as a plain sphere average.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .fields import EvenField, as_multi_index
from .hankel import DEFAULT_ORDER, fbt_inverse
from .means import iterated_direct, sphere_constant
from .quadrature import QuadOrders, interval_rule, sphere_rule
from .special import gamma as _gamma
from .special import j_gamma

__all__ = [
    "SupportError",
    "EwaldProblem",
    "ewald_constant",
    "reconstruction_constant",
    "integrand_field",
    "reconstruct_double_sphere",
    "reconstruct_radial",
    "make_phantom",
    "bump_profile",
    "check_support",
]


class SupportError(ValueError):
    """Data are nonzero on or beyond the Ewald sphere |x| = 2 lam."""


@dataclass(frozen=True, eq=False)
class EwaldProblem:
    gamma: tuple
    lam: float
    fhat: EvenField
    delta: float
    allow_singular: bool = False
    support: Optional[float] = None

    def __post_init__(self):
        gam = as_multi_index(self.gamma)
        object.__setattr__(self, "gamma", gam.entries)
        if not self.lam > 0:
            raise ValueError(f"lambda must be positive, got {self.lam}")
        if not 0 < self.delta < 1:
            raise ValueError(f"delta must lie in (0, 1), got {self.delta}")
        if self.fhat.dim != gam.n:
            raise ValueError(f"data field has dim {self.fhat.dim}, gamma has {gam.n} entries")
        if self.support is not None and not self.support > 0:
            raise ValueError(f"support radius must be positive, got {self.support}")
        if gam.n + gam.length < 3 and not self.allow_singular:
            raise ValueError(
                f"n + |gamma| = {gam.n + gam.length:g} < 3 makes the kernel exponent negative; "
                "pass allow_singular to accept it"
            )

    @property
    def n(self) -> int:
        return len(self.gamma)

    @property
    def N(self) -> float:
        return self.n + float(np.sum(self.gamma))

    @property
    def rho(self) -> float:
        """Radius outside which the data vanish; 2 lam (1 - delta) unless given."""
        if self.support is not None:
            return float(self.support)
        return 2.0 * self.lam * (1.0 - self.delta)


def check_support(problem: EwaldProblem, order: int = 12) -> None:
    """Raise SupportError if the data are nonzero on or beyond |x| = 2 lam.

    Samples the shell between the Ewald sphere and max(rho, 2 lam) * 1.25
    along the directions of a part-sphere rule.
    """
    edge = 2.0 * problem.lam
    outer = 1.25 * max(edge, problem.rho)
    dirs = sphere_rule(problem.n, problem.gamma, order).points
    radii = np.linspace(edge, outer, 4 * order)
    vals = np.asarray(problem.fhat(radii[:, None, None] * dirs[None]))
    if np.any(vals != 0):
        raise SupportError(
            f"data are nonzero on or outside the Ewald sphere |x| = 2 lambda = {edge:g}"
            f" (data radius {problem.rho:g})"
        )


def ewald_constant(n: int, gamma, lam: float) -> float:
    """sqrt(pi) 2^(2n-3) lam^(2N-4) Gamma((N-1)/2) / (Gamma^2(N/2) prod Gamma((g_j+1)/2) |S|^2)."""
    g = as_multi_index(gamma)
    if g.n != n:
        raise ValueError(f"gamma has {g.n} entries, expected {n}")
    if not lam > 0:
        raise ValueError("lambda must be positive")
    N = n + g.length
    s = sphere_constant(n, g)
    return float(
        np.sqrt(np.pi) * 2.0 ** (2 * n - 3) * lam ** (2 * N - 4) * _gamma(0.5 * (N - 1.0))
        / (_gamma(0.5 * N) ** 2 * np.prod(_gamma(0.5 * (g.array + 1.0))) * s * s)
    )


def reconstruction_constant(n: int, gamma, lam: float) -> float:
    """The constant C with F(y) = C |S|^2 I_{f_y}(0; lam, lam).

    Same shape as ``ewald_constant`` with 2^(n-2) in place of 2^(2n-3):
    combining the radial kernel prefactor, 1/|S| and the inversion constant
    2^(n-|gamma|)/prod Gamma^2 leaves exactly 2^(n-2). The two agree for n = 1.
    """
    return ewald_constant(n, gamma, lam) / 2.0 ** (n - 1)


def _outputs(problem, y):
    y = np.asarray(y, dtype=float)
    scalar = y.ndim <= 1
    y = y.reshape(-1, problem.n) if y.size else y.reshape(0, problem.n)
    if y.shape[-1] != problem.n or (scalar and y.shape[0] != 1):
        raise ValueError(f"output points need {problem.n} coordinates")
    return y, scalar


def integrand_field(problem: EwaldProblem, y) -> EvenField:
    """x -> |x| Fhat(x) j_gamma(x, y) / (4 lam^2 - |x|^2)^e.

    For a batch ``y`` of shape (m, n) the field returns a trailing axis of
    length m, one value per output point.
    """
    ys, scalar = _outputs(problem, y)
    e = 0.5 * (problem.N - 3.0)
    four_lam2 = 4.0 * problem.lam ** 2
    gam = problem.gamma

    def func(pts):
        r2 = np.einsum("...i,...i->...", pts, pts)
        data = np.asarray(problem.fhat(pts), dtype=float)
        live = data != 0
        if np.any(live & (r2 >= four_lam2)):
            raise SupportError("data are nonzero on or outside the Ewald sphere |x| = 2 lambda")
        out = np.zeros(data.shape + (ys.shape[0],))
        if np.any(live):
            rr = r2[live]
            radial = np.sqrt(rr) * data[live] / (four_lam2 - rr) ** e
            out[live] = radial[:, None] * j_gamma(gam, pts[live][:, None, :], ys[None, :, :])
        return out[..., 0] if scalar else out

    return EvenField(problem.n, func, smoothness="smooth", name="ewald_integrand")


def _orders(orders):
    return QuadOrders() if orders is None else orders


def _finish(value, scalar):
    value = np.asarray(value, dtype=float)
    return float(value) if scalar else value


def reconstruct_double_sphere(problem: EwaldProblem, y, orders: Optional[QuadOrders] = None):
    """C |S|^2 I_{f_y}(0; lam, lam), with I summed over two part-sphere rules.

    ``y`` is one point (n,) or a batch (m, n); a batch shares every sample
    of the double sum.
    """
    orders = _orders(orders)
    ys, scalar = _outputs(problem, y)
    if ys.shape[0] == 0:
        return np.zeros(0)
    check_support(problem)
    f_y = integrand_field(problem, ys)
    zero = np.zeros(problem.n)
    mean = iterated_direct(problem.gamma, f_y, zero, problem.lam, problem.lam, orders, factorize=False)
    s = sphere_constant(problem.n, problem.gamma)
    value = reconstruction_constant(problem.n, problem.gamma, problem.lam) * s * s * np.asarray(mean)
    return _finish(value[0] if scalar else value, scalar)


def _origin_mean(problem, f_y, radii, order):
    rule = sphere_rule(problem.n, problem.gamma, order)
    pts = radii[:, None, None] * rule.points[None]
    vals = np.asarray(f_y(pts))
    return np.tensordot(vals, rule.weights, axes=(1, 0)) / sphere_constant(problem.n, problem.gamma)


def reconstruct_radial(problem: EwaldProblem, y, orders: Optional[QuadOrders] = None):
    """The same reconstruction through one radial integral at lam = mu.

    I(0; lam, lam) = K int_0^{2 lam} ((4 lam^2 - r^2) r^2)^e M(0; r) r dr with
    K = 2 Gamma(N/2) / (sqrt(pi) Gamma((N-1)/2)) (2 lam^2)^(2-N). The data
    vanish beyond rho, so the integral stops there; r^(N-2) goes into the
    Jacobi weight and (4 lam^2 - r^2)^e is kept as an explicit factor.
    """
    orders = _orders(orders)
    ys, scalar = _outputs(problem, y)
    if ys.shape[0] == 0:
        return np.zeros(0)
    check_support(problem)
    f_y = integrand_field(problem, ys)
    N = problem.N
    e = 0.5 * (N - 3.0)
    lam = problem.lam
    r, w = interval_rule(orders.radial, 0.0, problem.rho, 0.0, N - 2.0)
    mean = _origin_mean(problem, f_y, r, orders.sphere)  # (radii, m)
    integral = np.tensordot(w * (4.0 * lam * lam - r * r) ** e, mean, axes=(0, 0))
    K = 2.0 * _gamma(0.5 * N) / (np.sqrt(np.pi) * _gamma(0.5 * (N - 1.0))) * (2.0 * lam * lam) ** (2.0 - N)
    s = sphere_constant(problem.n, problem.gamma)
    value = reconstruction_constant(problem.n, problem.gamma, lam) * s * s * K * integral
    return _finish(value[0] if scalar else value, scalar)


def bump_profile(rho: float, amplitude: float = 1.0, sharpness: float = 1.0):
    """t -> amplitude exp(-sharpness / (1 - (t/rho)^2)) for t < rho, else 0."""

    def profile(t):
        t = np.asarray(t, dtype=float)
        s = 1.0 - (t / rho) ** 2
        out = np.zeros_like(t)
        inside = s > 0
        out[inside] = amplitude * np.exp(-sharpness / s[inside])
        return out

    return profile


def make_phantom(n: int, gamma, lam: float, delta: float = 0.2, amplitude: float = 1.0,
                 sharpness: float = 1.0, transform_order: int = 2 * DEFAULT_ORDER,
                 allow_singular: bool = False, radius: Optional[float] = None):
    """Radial bump data inside the Ewald ball and the exact-in-principle answer.

    Returns ``(problem, truth)``; ``truth`` evaluates the inverse transform
    of the bump over [0, rho]^n at ``transform_order`` nodes per axis.
    ``radius`` overrides the bump radius rho = 2 lam (1 - delta); a radius
    of 2 lam or more makes a problem that the reconstructions reject.
    """
    if not 0.05 < delta < 0.5:
        raise ValueError(f"phantom margin delta must lie in (0.05, 0.5), got {delta}")
    gam = as_multi_index(gamma)
    if gam.n != n:
        raise ValueError(f"gamma has {gam.n} entries, expected {n}")
    rho = 2.0 * lam * (1.0 - delta) if radius is None else float(radius)
    prof = bump_profile(rho, amplitude, sharpness)

    def fhat_func(pts):
        return prof(np.sqrt(np.sum(pts * pts, axis=-1)))

    fhat = EvenField(n, fhat_func, smoothness="smooth", name="bump")
    problem = EwaldProblem(gam.entries, float(lam), fhat, float(delta), allow_singular,
                           None if radius is None else rho)

    def truth_func(pts):
        flat = pts.reshape(-1, n)
        return fbt_inverse(gam, fhat, flat, rho, transform_order).reshape(pts.shape[:-1])

    return problem, EvenField(n, truth_func, smoothness="analytic", name="bump_truth")
