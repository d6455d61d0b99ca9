"""Multi-indices and even scalar fields on the positive orthant.

A field is evaluated on arrays of points with shape ``(..., n)`` and returns
values of shape ``(...)``. Operators in this package only ever evaluate
fields at nonnegative coordinates; test fields are built from functions of
x_i^2 so they are even in every coordinate.

Fields that are sums of products of 1-D factors (``SeparableField``) expose
their terms, which lets the translation operators factor per coordinate.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .special import normalized_j

__all__ = [
    "MultiIndex",
    "EvenField",
    "SeparableField",
    "as_multi_index",
    "one",
    "gaussian",
    "poly_gaussian",
    "j_gamma_field",
    "radial_field",
    "BUILTIN_FIELDS",
    "builtin_field",
]


@dataclass(frozen=True)
class MultiIndex:
    """Weight vector gamma = (gamma_1, ..., gamma_n), every entry positive."""

    entries: tuple

    def __post_init__(self):
        vals = tuple(float(v) for v in self.entries)
        if not vals:
            raise ValueError("gamma must have at least one entry")
        for i, v in enumerate(vals):
            if not (v > 0) or not np.isfinite(v):
                raise ValueError(f"gamma[{i}] must be positive, got {v}")
        object.__setattr__(self, "entries", vals)

    @property
    def n(self) -> int:
        return len(self.entries)

    @property
    def length(self) -> float:
        """|gamma|, the sum of the entries."""
        return float(np.sum(self.entries))

    @property
    def nu(self) -> float:
        """Order n + |gamma| - 1 of the radial translation."""
        return self.n + self.length - 1.0

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.entries, dtype=float)

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)


def as_multi_index(gamma) -> MultiIndex:
    if isinstance(gamma, MultiIndex):
        return gamma
    return MultiIndex(tuple(np.atleast_1d(np.asarray(gamma, dtype=float)).tolist()))


def _as_points(x, dim):
    pts = np.asarray(x, dtype=float)
    if pts.ndim == 0 and dim == 1:
        pts = pts.reshape(1)
    if pts.shape[-1:] != (dim,):
        raise ValueError(f"expected points with last axis {dim}, got shape {pts.shape}")
    return pts


class EvenField:
    """Scalar field on the closed positive orthant, even in each coordinate.

    ``func`` receives an array of shape ``(..., dim)`` and must return an
    array of shape ``(...)``.
    """

    separable_terms = None

    def __init__(self, dim: int, func: Callable, smoothness: str = "smooth", name: str = "field"):
        if dim < 1:
            raise ValueError("field dimension must be >= 1")
        self.dim = int(dim)
        self._func = func
        self.smoothness = smoothness
        self.name = name

    def __call__(self, x):
        pts = _as_points(x, self.dim)
        out = np.asarray(self._func(pts), dtype=float)
        return out if out.ndim else float(out)

    def __repr__(self):
        return f"{type(self).__name__}(dim={self.dim}, name={self.name!r})"

    # linear combinations, used for linearity checks
    def __add__(self, other):
        return _combine(self, other, 1.0, 1.0)

    def __sub__(self, other):
        return _combine(self, other, 1.0, -1.0)

    def __mul__(self, c):
        if not np.isscalar(c):
            return NotImplemented
        return _combine(self, None, float(c), 0.0)

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1.0


class SeparableField(EvenField):
    """sum_t c_t prod_i f_{t,i}(x_i) with 1-D even factors f_{t,i}.

    Factor callables map an array of coordinates to an array of the same
    shape. Reusing the same factor object across terms lets operators share
    work per distinct factor.
    """

    def __init__(self, dim: int, terms: Sequence, smoothness: str = "analytic", name: str = "separable"):
        terms = [(float(c), tuple(fs)) for c, fs in terms]
        for _, fs in terms:
            if len(fs) != dim:
                raise ValueError(f"each term needs {dim} factors, got {len(fs)}")
        self.separable_terms = terms
        super().__init__(dim, self._eval, smoothness, name)

    def _eval(self, pts):
        out = np.zeros(pts.shape[:-1])
        for c, fs in self.separable_terms:
            prod = np.full(pts.shape[:-1], c)
            for i, f in enumerate(fs):
                prod = prod * f(pts[..., i])
            out = out + prod
        return out


def _combine(f, g, a, b):
    if g is not None and not isinstance(g, EvenField):
        return NotImplemented
    if g is not None and g.dim != f.dim:
        raise ValueError("cannot combine fields of different dimension")
    parts = [(a, f)] + ([(b, g)] if g is not None else [])
    if all(h.separable_terms is not None for _, h in parts):
        terms = [(s * c, fs) for s, h in parts for c, fs in h.separable_terms]
        return SeparableField(f.dim, terms, name="combination")

    def func(pts):
        return sum(s * np.asarray(h(pts)) for s, h in parts)

    return EvenField(f.dim, func, smoothness=f.smoothness, name="combination")


# ---------------------------------------------------------------------------
# builtin fields
# ---------------------------------------------------------------------------

def _ones(t):
    return np.ones_like(np.asarray(t, dtype=float))


def one(n: int) -> SeparableField:
    return SeparableField(n, [(1.0, (_ones,) * n)], name="one")


def _gauss_factor(width: float):
    s = 0.5 / (width * width)

    def factor(t):
        t = np.asarray(t, dtype=float)
        return np.exp(-s * t * t)

    return factor


def gaussian(n: int, width: float = 1.0) -> SeparableField:
    """exp(-|x|^2 / (2 width^2))."""
    f = _gauss_factor(width)
    return SeparableField(n, [(1.0, (f,) * n)], name="gaussian")


def poly_gaussian(n: int, width: float = 1.0) -> SeparableField:
    """|x|^2 exp(-|x|^2 / (2 width^2))."""
    g = _gauss_factor(width)

    def sq_g(t):
        t = np.asarray(t, dtype=float)
        return t * t * g(t)

    terms = []
    for i in range(n):
        fs = [g] * n
        fs[i] = sq_g
        terms.append((1.0, tuple(fs)))
    return SeparableField(n, terms, name="poly_gaussian")


def j_gamma_field(gamma, xi) -> SeparableField:
    """x -> prod_i j_{(gamma_i-1)/2}(x_i xi_i) for a fixed frequency xi."""
    gam = as_multi_index(gamma)
    xi = np.asarray(xi, dtype=float).reshape(-1)
    if xi.size != gam.n:
        raise ValueError("xi must have as many entries as gamma")
    factors = []
    for g_i, xi_i in zip(gam.entries, xi):
        omega = 0.5 * (g_i - 1.0)

        def factor(t, omega=omega, xi_i=float(xi_i)):
            return normalized_j(omega, np.abs(np.asarray(t, dtype=float)) * xi_i)

        factors.append(factor)
    return SeparableField(gam.n, [(1.0, tuple(factors))], name="j_gamma")


def radial_field(n: int, profile: Callable, smoothness: str = "smooth", name: str = "radial") -> EvenField:
    """x -> profile(|x|)."""

    def func(pts):
        return profile(np.sqrt(np.sum(pts * pts, axis=-1)))

    return EvenField(n, func, smoothness=smoothness, name=name)


BUILTIN_FIELDS = ("gaussian", "j_gamma", "one", "poly_gaussian")


def default_xi(n: int) -> np.ndarray:
    """Unit frequency used by the ``j_gamma`` builtin: (1, ..., 1)/sqrt(n)."""
    return np.full(n, 1.0 / np.sqrt(n))


def builtin_field(name: str, gamma, xi=None) -> SeparableField:
    gam = as_multi_index(gamma)
    if name == "gaussian":
        return gaussian(gam.n)
    if name == "poly_gaussian":
        return poly_gaussian(gam.n)
    if name == "one":
        return one(gam.n)
    if name == "j_gamma":
        return j_gamma_field(gam, default_xi(gam.n) if xi is None else xi)
    raise ValueError(f"unknown builtin field {name!r}; choose from {', '.join(BUILTIN_FIELDS)}")
