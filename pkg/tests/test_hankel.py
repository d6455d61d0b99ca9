import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate, special

from besselmeans.fields import EvenField, SeparableField, gaussian, poly_gaussian
from besselmeans.hankel import (
    GridTable,
    fbt_forward,
    fbt_inverse,
    gaussian_image_constant,
    grid_transform,
    inversion_constant,
    transformed_field,
)
from besselmeans.quadrature import interval_rule


def gaussian_image(g, xi):
    xi = np.atleast_2d(xi)
    return np.exp(-0.5 * np.sum(xi * xi, axis=-1)) * gaussian_image_constant(g)


def test_constants():
    assert inversion_constant((1.0,)) == pytest.approx(1.0)
    assert inversion_constant((2.0,)) == pytest.approx(0.5 / (math.sqrt(math.pi) / 2) ** 2)
    assert gaussian_image_constant((1.0, 1.0)) == pytest.approx(1.0)
    assert gaussian_image_constant((2.0,)) == pytest.approx(math.sqrt(2) * math.sqrt(math.pi) / 2)


def test_forward_matches_adaptive_hankel_integral():
    # mpmath/scipy oracle: int J0(1.3 x) exp(-x^2/2) x dx
    val = fbt_forward((1.0,), gaussian(1), [1.3])
    assert val == pytest.approx(0.429557358210739124, rel=1e-13)
    f = lambda x: x ** 1.5 * np.exp(-x * x) * special.jv(0.25, 0.7 * x) * math.gamma(1.25) * (2 / (0.7 * x)) ** 0.25  # noqa: E731
    ref = integrate.quad(f, 0, 12, epsabs=1e-14, limit=200)[0]
    assert fbt_forward((1.5,), gaussian(1, math.sqrt(0.5)), [0.7]) == pytest.approx(ref, rel=1e-11)


@pytest.mark.parametrize("g", [(0.5,), (1.0, 2.0), (2.0, 0.5)])
def test_gaussian_pair(g):
    n = len(g)
    rng = np.random.default_rng(1)
    xi = rng.uniform(0, 5 / math.sqrt(n), (12, n))
    got = fbt_forward(g, gaussian(n), xi)
    assert np.allclose(got, gaussian_image(g, xi), rtol=1e-8, atol=0)


def test_zero_frequency_is_weighted_mass():
    g = (1.0, 2.0)
    f = poly_gaussian(2)
    x, w = interval_rule(96, 0.0, 12.0, 0.0, 1.0)
    y, v = interval_rule(96, 0.0, 12.0, 0.0, 2.0)
    pts = np.stack(np.meshgrid(x, y, indexing="ij"), axis=-1)
    mass = float(np.sum(np.multiply.outer(w, v) * f(pts)))
    assert fbt_forward(g, f, [0.0, 0.0]) == pytest.approx(mass, rel=1e-13)


def test_separable_and_general_paths_agree():
    g = (0.5, 2.0)
    f = poly_gaussian(2)
    plain = EvenField(2, lambda p: f(p))
    xi = np.array([[0.3, 1.2], [2.0, 0.1]])
    assert np.allclose(fbt_forward(g, f, xi), fbt_forward(g, plain, xi), rtol=1e-12)


def test_linearity_and_round_trip():
    g = (1.0, 0.5)
    f, h = gaussian(2), poly_gaussian(2)
    xi = np.array([[0.4, 0.9], [1.5, 2.5]])
    combo = f * 2.0 - h
    assert np.allclose(fbt_forward(g, combo, xi), 2 * fbt_forward(g, f, xi) - fbt_forward(g, h, xi), rtol=1e-13)
    image = transformed_field(g, f, "forward")
    x = np.array([[0.0, 0.0], [1.0, 2.0], [2.1, 2.1]])
    assert np.allclose(fbt_inverse(g, image, x), f(x), atol=1e-7)


def test_inverse_of_closed_form_is_gaussian():
    g = (2.0, 1.0)
    fhat = EvenField(2, lambda p: gaussian_image(g, p.reshape(-1, 2)).reshape(p.shape[:-1]))
    x = np.array([[0.0, 0.0], [0.5, 1.5], [2.0, 2.0]])
    assert np.allclose(fbt_inverse(g, fhat, x), np.exp(-0.5 * np.sum(x * x, axis=1)), atol=1e-8)
    assert fbt_inverse(g, gaussian(2), [0.0, 0.0]) >= 0


def test_forward_rejects_bad_input():
    with pytest.raises(ValueError):
        fbt_forward((1.0,), gaussian(1), [1.0], R_trunc=0.0)
    with pytest.raises(ValueError):
        fbt_forward((1.0, 1.0), gaussian(1), [1.0, 1.0])
    with pytest.raises(ValueError):
        fbt_forward((1.0,), gaussian(1), [-1.0])
    with pytest.raises(ValueError):
        transformed_field((1.0,), gaussian(1), "sideways")


def test_transformed_separable_field_stays_separable():
    img = transformed_field((1.0, 1.0), gaussian(2), "forward")
    assert isinstance(img, SeparableField)
    assert img([1.0, 0.5]) == pytest.approx(math.exp(-0.625), rel=1e-10)


@given(perm_seed=st.integers(0, 5), a=st.floats(0.0, 3.0), b=st.floats(0.0, 3.0), c=st.floats(0.0, 3.0))
def test_permutation_symmetry(perm_seed, a, b, c):
    perm = list(itertools.permutations(range(3)))[perm_seed]
    g = np.array([0.5, 1.0, 2.0])
    scales = np.array([1.0, 0.5, 2.0])
    xi = np.array([a, b, c])

    def field(s):
        return EvenField(3, lambda p: np.exp(-np.sum(s * p * p, axis=-1)))

    base = fbt_forward(tuple(g), field(scales), xi, 8.0, 40)
    permuted = fbt_forward(tuple(g[list(perm)]), field(scales[list(perm)]), xi[list(perm)], 8.0, 40)
    assert permuted == pytest.approx(base, rel=1e-12, abs=1e-15)


def test_grid_table_validation():
    with pytest.raises(ValueError):
        GridTable((np.array([0.0, 1.0, 1.0]),), np.zeros(3), (1.0,))
    with pytest.raises(ValueError):
        GridTable((np.array([-0.5, 1.0]),), np.zeros(2), (1.0,))
    with pytest.raises(ValueError):
        GridTable((np.array([0.0, 1.0]),), np.zeros(3), (1.0,))
    with pytest.raises(ValueError):
        GridTable((np.array([0.0, 1.0]),), np.zeros(2), (1.0, 1.0))
    with pytest.raises(ValueError):
        GridTable((np.array([]),), np.zeros(0), (1.0,))


def test_grid_transform_examples():
    ax = np.linspace(0.0, 8.0, 161)
    table = GridTable.sample((1.0,), gaussian(1), [ax])
    image = grid_transform((1.0,), table, "forward", [np.linspace(0, 4, 9)])
    assert np.allclose(image.values, np.exp(-0.5 * np.linspace(0, 4, 9) ** 2), atol=1e-9)
    zero = GridTable((ax,), np.zeros(ax.size), (1.0,))
    assert np.all(grid_transform((1.0,), zero, "inverse", [ax]).values == 0.0)
    with pytest.raises(ValueError):
        grid_transform((1.0,), table, "forward", [np.array([])])


@pytest.mark.parametrize("g", [(0.5, 2.0), (1.0, 1.0)])
def test_grid_round_trip(g):
    ax = np.linspace(0.0, 9.0, 121)
    table = GridTable.sample(g, gaussian(2), [ax, ax])
    back = grid_transform(g, grid_transform(g, table, "forward", [ax, ax]), "inverse", [ax, ax])
    assert np.max(np.abs(back.values - table.values)) <= 1e-6 * np.max(np.abs(table.values))
