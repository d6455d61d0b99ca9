import numpy as np
import pytest

from besselmeans.config import ConfigError, RunConfig
from besselmeans.fields import (
    EvenField,
    MultiIndex,
    builtin_field,
    default_xi,
    gaussian,
    j_gamma_field,
    one,
    poly_gaussian,
)
from besselmeans.quadrature import QuadOrders
from besselmeans.special import j_gamma


def test_multi_index():
    g = MultiIndex((0.5, 2.0, 1.0))
    assert g.n == 3 and g.length == 3.5 and g.nu == 5.5
    for bad in ((), (1.0, 0.0), (1.0, float("inf"))):
        with pytest.raises(ValueError):
            MultiIndex(bad)


def test_builtin_fields():
    x = np.array([[0.3, 0.4], [1.0, 2.0]])
    assert np.allclose(gaussian(2)(x), np.exp(-0.5 * np.sum(x * x, axis=1)))
    assert np.allclose(poly_gaussian(2)(x), np.sum(x * x, axis=1) * np.exp(-0.5 * np.sum(x * x, axis=1)))
    assert np.all(one(2)(x) == 1.0)
    xi = default_xi(2)
    assert np.linalg.norm(xi) == pytest.approx(1.0)
    assert np.allclose(builtin_field("j_gamma", (1.0, 2.0))(x), j_gamma((1.0, 2.0), x, xi))
    assert np.allclose(j_gamma_field((1.0, 2.0), [0.5, 3.0])(x), j_gamma((1.0, 2.0), x, [0.5, 3.0]))
    with pytest.raises(ValueError):
        builtin_field("cauchy", (1.0,))


def test_field_arithmetic_and_shape_checks():
    f, h = gaussian(2), one(2)
    x = np.array([0.5, 0.5])
    assert (f + h)(x) == pytest.approx(f(x) + 1.0)
    assert (f - h)(x) == pytest.approx(f(x) - 1.0)
    assert (f * 3.0)(x) == pytest.approx(3.0 * f(x))
    assert (-f)(x) == pytest.approx(-f(x))
    with pytest.raises(ValueError):
        f(np.array([0.1, 0.2, 0.3]))
    with pytest.raises(ValueError):
        EvenField(0, lambda p: p)


def test_run_config_defaults_and_echo():
    cfg = RunConfig()
    assert cfg.echo()["gamma"] == "1.0 1.0"
    assert cfg.echo()["tol"] == "default"
    assert RunConfig(tol=0.0).tol == 0.0


@pytest.mark.parametrize("kwargs, field", [
    (dict(gamma=(1.0, -1.0)), "gamma"),
    (dict(gamma=(1.0,)), "gamma"),
    (dict(n=0, gamma=()), "n"),
    (dict(orders=QuadOrders(shift=3)), "order-shift"),
    (dict(orders=QuadOrders(transform=2)), "order-transform"),
    (dict(tol=-1.0), "tol"),
    (dict(rtrunc=0.0), "rtrunc"),
    (dict(lam=-2.0), "lambda"),
    (dict(delta=1.0), "delta"),
    (dict(fmt="xml"), "format"),
])
def test_run_config_names_the_bad_field(kwargs, field):
    with pytest.raises(ConfigError) as info:
        RunConfig(**kwargs)
    assert info.value.field == field
    assert field in str(info.value)
