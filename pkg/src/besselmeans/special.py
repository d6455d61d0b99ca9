"""Gamma and Bessel functions used by every constant and kernel in the package.

All functions accept scalars or numpy arrays and broadcast like ufuncs.
"""
from __future__ import annotations

import numpy as np
from scipy import special as _sp

__all__ = ["gamma", "bessel_j", "normalized_j", "j_gamma"]

# Lanczos approximation, g = 7, nine coefficients (Godfrey's set).
_LANCZOS_G = 7.0
_LANCZOS_COEF = np.array([
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
])

# j_omega(t) is summed from its power series below this argument; the
# cancellation there costs at most ~3e-14 absolute accuracy.
SERIES_THRESHOLD = 8.0
_SERIES_TERMS = 28


def _lanczos(z):
    # valid for z >= 0.5
    zm = z - 1.0
    acc = np.full_like(zm, _LANCZOS_COEF[0])
    for k in range(1, len(_LANCZOS_COEF)):
        acc = acc + _LANCZOS_COEF[k] / (zm + k)
    t = zm + _LANCZOS_G + 0.5
    return np.sqrt(2.0 * np.pi) * t ** (zm + 0.5) * np.exp(-t) * acc


def gamma(x):
    """Euler's Gamma function for positive real arguments.

    Raises ValueError for any nonpositive entry.
    """
    arr = np.asarray(x, dtype=float)
    if np.any(~(arr > 0)):
        raise ValueError(f"gamma: argument must be positive, got {x!r}")
    small = arr < 0.5
    out = np.empty_like(arr)
    big = ~small
    out[big] = _lanczos(arr[big])
    if np.any(small):
        xs = arr[small]
        # reflection keeps the series argument in the well-conditioned range
        out[small] = np.pi / (np.sin(np.pi * xs) * _lanczos(1.0 - xs))
    return out if out.ndim else float(out)


def bessel_j(nu, t):
    """Bessel function of the first kind J_nu(t) for nu >= -1/2, t >= 0."""
    nu_arr = np.asarray(nu, dtype=float)
    t_arr = np.asarray(t, dtype=float)
    if np.any(nu_arr < -0.5):
        raise ValueError(f"bessel_j: order must be >= -1/2, got {nu!r}")
    if np.any(t_arr < 0):
        raise ValueError("bessel_j: argument must be nonnegative")
    out = _sp.jv(nu_arr, t_arr)
    return out if np.ndim(out) else float(out)


def _series_coefficients(omega, terms):
    # c_k = (-1/4)^k / (k! (omega+1)_k)
    c = np.empty(terms)
    c[0] = 1.0
    for k in range(1, terms):
        c[k] = c[k - 1] * -0.25 / (k * (omega + k))
    return c


def _terms_needed(tmax):
    # smallest K with (tmax^2/4)^K / (K!)^2 below 1e-17, capped at _SERIES_TERMS
    q = 0.25 * tmax * tmax
    term, k = 1.0, 0
    while k < _SERIES_TERMS - 1 and term > 1e-17:
        k += 1
        term *= q / (k * k)
    return k + 1


def _j_series(omega: float, t):
    """sum_k (-t^2/4)^k / (k! (omega+1)_k) by Horner in t^2."""
    z = t * t
    tmax = float(np.sqrt(z.max())) if z.size else 0.0
    c = _series_coefficients(omega, _terms_needed(tmax))
    acc = np.full(z.shape, c[-1])
    for ck in c[-2::-1]:
        acc *= z
        acc += ck
    return acc


def _normalized_one_order(omega: float, t):
    if not t.size or t.max() < SERIES_THRESHOLD:
        return _j_series(omega, t)
    out = np.empty(t.shape)
    near = t < SERIES_THRESHOLD
    out[near] = _j_series(omega, t[near])
    far = ~near
    s = t[far]
    out[far] = gamma(omega + 1.0) * (2.0 / s) ** omega * _sp.jv(omega, s)
    return out


def normalized_j(omega, t):
    """Normalized Bessel function j_omega(t) = Gamma(omega+1) (2/t)^omega J_omega(t).

    Equal to 1 at t = 0. Orders in (-1/2, 0] are accepted: they arise from
    weights gamma_i in (0, 1].
    """
    om = np.asarray(omega, dtype=float)
    tt = np.asarray(t, dtype=float)
    if np.any(om <= -0.5):
        raise ValueError(f"normalized_j: order must exceed -1/2, got {omega!r}")
    if np.any(tt < 0):
        raise ValueError("normalized_j: argument must be nonnegative")
    if om.ndim == 0:
        out = _normalized_one_order(float(om), tt)
    else:
        om, tt = np.broadcast_arrays(om, tt)
        out = np.empty(om.shape)
        for o in np.unique(om):
            sel = om == o
            out[sel] = _normalized_one_order(float(o), tt[sel])
    return out if out.ndim else float(out)


def j_gamma(gamma_entries, x, xi):
    """Product kernel prod_i j_{(gamma_i-1)/2}(x_i xi_i).

    ``x`` and ``xi`` broadcast against each other; the last axis indexes
    coordinates and must match ``len(gamma_entries)``.
    """
    g = np.asarray(gamma_entries, dtype=float).reshape(-1)
    x = np.asarray(x, dtype=float)
    xi = np.asarray(xi, dtype=float)
    if x.shape[-1:] != g.shape or xi.shape[-1:] != g.shape:
        raise ValueError(
            f"j_gamma: dimension mismatch (gamma has {g.size} entries, "
            f"x has shape {x.shape}, xi has shape {xi.shape})"
        )
    shape = np.broadcast_shapes(x.shape, xi.shape)[:-1]
    out = np.ones(shape)
    for i, g_i in enumerate(g):
        arg = x[..., i] * xi[..., i]
        if np.any(arg != 0):
            out = out * normalized_j(0.5 * (g_i - 1.0), arg)
    return out if out.ndim else float(out)
