import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate

from besselmeans.fields import EvenField, gaussian, j_gamma_field, one, poly_gaussian
from besselmeans.means import (
    MeanEvaluation,
    ball_derivative_check,
    ball_integral_check,
    evaluate_iterated,
    iterated_alpha_beta,
    iterated_direct,
    iterated_via_kernel,
    iterated_via_translation,
    plane_wave_sphere_integral,
    printed_poisson_constant,
    sphere_constant,
    spherical_mean,
)
from besselmeans.quadrature import QuadOrders
from besselmeans.special import j_gamma, normalized_j
from besselmeans.translation import shift1d

SMALL = QuadOrders(24, 24, 24, 48)


def eigen_value(g, x, xi, *radii):
    n = len(g)
    om = 0.5 * (n + sum(g) - 2)
    out = j_gamma(g, x, xi)
    for r in radii:
        out *= normalized_j(om, r * np.linalg.norm(xi))
    return out


def test_sphere_constant_examples():
    assert sphere_constant(1, (3.3,)) == pytest.approx(1.0, rel=1e-14)
    assert sphere_constant(2, (1, 1)) == pytest.approx(0.5, rel=1e-14)
    assert sphere_constant(2, (2, 2)) == pytest.approx(math.pi / 16, rel=1e-14)


def test_sphere_constant_by_adaptive_quadrature():
    a, b = 0.7, 1.9
    ref = integrate.quad(lambda t: math.cos(t) ** a * math.sin(t) ** b, 0, math.pi / 2)[0]
    assert sphere_constant(2, (a, b)) == pytest.approx(ref, rel=1e-10)


def test_mean_examples():
    g = (0.5, 2.0)
    f = poly_gaussian(2)
    x = np.array([0.3, 0.8])
    assert spherical_mean(g, f, x, 0.0) == pytest.approx(float(f(x)), rel=1e-14)
    assert spherical_mean(g, one(2), x, 1.7) == pytest.approx(1.0, rel=1e-13)
    xi = np.array([0.6, 0.8])
    for r in (0.5, 3.0, 7.5):
        val = spherical_mean(g, j_gamma_field(g, xi), x, r)
        assert val == pytest.approx(eigen_value(g, x, xi, r), abs=1e-12)


def test_mean_in_one_dimension_is_a_translation():
    f = gaussian(1)
    assert spherical_mean((1.4,), f, [0.6], 1.1) == pytest.approx(shift1d(1.4, f, 0.6, 1.1), rel=1e-15)


def test_mean_rejects_negative_radius():
    with pytest.raises(ValueError):
        spherical_mean((1.0, 1.0), gaussian(2), [0.1, 0.1], -0.5)


def test_mean_vector_radii():
    r = np.array([0.0, 0.5, 1.0])
    out = spherical_mean((1.0, 1.0), gaussian(2), [0.2, 0.4], r)
    assert out.shape == (3,)
    assert out[1] == pytest.approx(spherical_mean((1.0, 1.0), gaussian(2), [0.2, 0.4], 0.5), rel=1e-15)


def test_mean_general_path_matches_separable_path():
    g = (1.0, 2.0)
    f = gaussian(2)
    plain = EvenField(2, lambda p: f(p))
    x = [0.4, 0.9]
    assert spherical_mean(g, plain, x, 1.3, SMALL) == pytest.approx(spherical_mean(g, f, x, 1.3, SMALL), rel=1e-13)


def test_iterated_examples():
    g = (1.0, 1.0)
    f = gaussian(2)
    x = np.array([0.5, 0.5])
    assert iterated_direct(g, f, x, 0.0, 0.0) == pytest.approx(float(f(x)), rel=1e-14)
    assert iterated_direct(g, f, x, 0.9, 0.0) == pytest.approx(spherical_mean(g, f, x, 0.9), rel=1e-13)
    # mpmath: J0(0.3) J0(0.4) j_1(0.7) j_1(1.1)
    xi = np.array([0.6, 0.8])
    assert iterated_direct(g, j_gamma_field(g, xi), x, 0.7, 1.1) == pytest.approx(0.755639486078675554, rel=1e-12)


def test_theorem_paths_agree_on_the_stated_tuple():
    g = (1.0, 1.0)
    f = gaussian(2)
    x = [0.5, 0.5]
    d = iterated_direct(g, f, x, 0.7, 1.1)
    assert iterated_via_translation(g, f, x, 0.7, 1.1) == pytest.approx(d, abs=1e-7)
    assert iterated_via_kernel(g, f, x, 1.0, 1.0) == pytest.approx(iterated_direct(g, f, x, 1.0, 1.0), abs=1e-7)


def test_translation_path_degenerates_to_the_mean():
    g = (2.0, 0.5)
    f = poly_gaussian(2)
    assert iterated_via_translation(g, f, [0.3, 0.3], 0.0, 1.2) == pytest.approx(
        spherical_mean(g, f, [0.3, 0.3], 1.2), rel=1e-13)


def test_kernel_rejects_zero_radius():
    with pytest.raises(ValueError):
        iterated_via_kernel((1.0,), gaussian(1), [0.1], 0.0, 1.0)


def test_alpha_beta_examples():
    g = (0.5, 1.0)
    f = gaussian(2)
    x = [0.2, 0.6]
    assert iterated_alpha_beta(g, one(2), x, 0.3, 1.7) == pytest.approx(1.0, rel=1e-12)
    assert iterated_alpha_beta(g, f, x, 0.0, 1.6) == pytest.approx(iterated_via_kernel(g, f, x, 0.8, 0.8), rel=1e-13)
    with pytest.raises(ValueError):
        iterated_alpha_beta(g, f, x, 1.0, 1.0)


@given(lam=st.floats(0.1, 3.0), mu=st.floats(0.1, 3.0))
def test_translation_and_kernel_agree(lam, mu):
    g = (1.0, 2.0)
    f = poly_gaussian(2)
    x = [0.7, 0.3]
    a = iterated_via_translation(g, f, x, lam, mu)
    b = iterated_via_kernel(g, f, x, lam, mu)
    assert abs(a - b) <= 1e-8 * (1 + abs(a))


@given(alpha=st.floats(0.0, 2.0), width=st.floats(0.05, 2.0))
def test_alpha_beta_is_the_kernel_route(alpha, width):
    beta = alpha + width
    g = (1.5,)
    f = gaussian(1)
    a = iterated_alpha_beta(g, f, [0.4], alpha, beta)
    b = iterated_via_kernel(g, f, [0.4], 0.5 * (beta - alpha), 0.5 * (beta + alpha))
    assert a == pytest.approx(b, abs=1e-9)


@given(lam=st.floats(0.0, 3.0), mu=st.floats(0.0, 3.0))
def test_direct_path_is_symmetric(lam, mu):
    g = (0.5, 1.0)
    f = gaussian(2)
    a = iterated_direct(g, f, [0.3, 0.9], lam, mu, SMALL)
    b = iterated_direct(g, f, [0.3, 0.9], mu, lam, SMALL)
    assert a == pytest.approx(b, abs=1e-9)


def test_direct_general_path_off_the_origin():
    g = (1.0, 0.5)
    xi = np.array([0.5, 0.7])
    f = j_gamma_field(g, xi)
    x = np.array([0.2, 0.5])
    val = iterated_direct(g, f, x, 0.8, 0.6, QuadOrders(10, 14, 14, 24), factorize=False)
    assert val == pytest.approx(eigen_value(g, x, xi, 0.8, 0.6), abs=1e-8)


def test_mean_evaluation_record():
    ev = evaluate_iterated((1.0,), gaussian(1), [0.4], 0.0, 0.0, "direct")
    assert ev.value == pytest.approx(math.exp(-0.08), rel=1e-14)
    for path in ("translation", "kernel", "symmetric"):
        other = evaluate_iterated((1.0,), gaussian(1), [0.4], 0.5, 0.9, path)
        assert other.value == pytest.approx(evaluate_iterated((1.0,), gaussian(1), [0.4], 0.5, 0.9, "direct").value,
                                            abs=1e-9)
    with pytest.raises(ValueError):
        MeanEvaluation((0.4,), 0.5, "direct", QuadOrders(), r=0.0, f_at_x=1.0)
    with pytest.raises(ValueError):
        evaluate_iterated((1.0,), gaussian(1), [0.4], 0.5, 0.9, "sideways")


def test_ball_identities():
    g = (1.0, 0.5)
    gauss_profile = lambda r: np.exp(-0.5 * np.asarray(r) ** 2)  # noqa: E731
    lhs, rhs = ball_integral_check(g, gauss_profile, gaussian(2), 2.0)
    assert lhs == pytest.approx(rhs, rel=1e-8)
    lhs, rhs = ball_integral_check(g, lambda r: np.ones_like(r), one(2), 1.5)
    N = 2 + sum(g)
    closed = sphere_constant(2, g) * 1.5 ** N / N
    assert lhs == pytest.approx(closed, rel=1e-12) and rhs == pytest.approx(closed, rel=1e-12)
    a, b = ball_derivative_check(g, gaussian(2), 1.3)
    assert a == pytest.approx(b, rel=1e-6)


def test_plane_wave_ratio_is_constant():
    g = (1.0, 2.0)
    xi = np.array([0.9, 1.4])
    ratios = []
    for prof in (np.cos, lambda t: np.exp(-t * t), lambda t: t ** 4, lambda t: np.cos(2 * t) + t * t):
        lhs, jac = plane_wave_sphere_integral(g, prof, xi, SMALL)
        ratios.append(lhs / jac)
    assert np.ptp(ratios) <= 1e-8 * abs(ratios[0])
    assert ratios[0] == pytest.approx(printed_poisson_constant(g), rel=1e-8)
