
import numpy as np
import pytest
from scipy import integrate as sp_integrate

from genhilbert.quadrature import QuadratureError, QuadSettings, integrate_tail


def test_polynomial_exact():
    val = integrate_tail(lambda t, u: 3 * t**2)
    assert val == pytest.approx(1.0, rel=1e-14)


def test_endpoint_singularity_matches_closed_form():
    # int_0^1 (1-t)^(-1/2) dt = 2
    val = integrate_tail(lambda t, u: u**-0.5)
    assert val == pytest.approx(2.0, rel=1e-13)


def test_lower_limit():
    t0 = 0.75
    val = integrate_tail(lambda t, u: np.ones_like(t), t0)
    assert val == pytest.approx(0.25, rel=1e-14)


def test_log_weight_against_scipy_quad():
    f = lambda t: np.log(2.0 / (1.0 - t)) ** -2
    ref, _ = sp_integrate.quad(f, 0.0, 1.0, epsabs=0, epsrel=1e-13, limit=200)
    val = integrate_tail(lambda t, u: np.log(2.0 / u) ** -2)
    assert val == pytest.approx(ref, rel=1e-10)


def test_vector_components_are_independent():
    n = np.arange(5.0)
    both = integrate_tail(lambda t, u: np.power.outer(t, n).T)
    for k in range(5):
        alone = integrate_tail(lambda t, u, k=k: t**k)
        assert both[k] == pytest.approx(alone, rel=1e-15)
        assert both[k] == pytest.approx(1.0 / (k + 1), rel=1e-14)


def test_batch_size_does_not_change_result():
    f = lambda t, u: u**0.3 * np.cos(5 * t)
    a = integrate_tail(f, 0.1, QuadSettings(batch=1))
    b = integrate_tail(f, 0.1, QuadSettings(batch=16))
    assert a == b


def test_nonconvergent_raises():
    # (1-t)^-1 is not integrable; panel contributions stay constant
    with pytest.raises(QuadratureError):
        integrate_tail(lambda t, u: 1.0 / u, 0.0, QuadSettings(max_panels=200))


@pytest.mark.parametrize("kwargs", [{"tol": 0.0}, {"tol": 1e-3}, {"nodes": 1}, {"batch": 0}])
def test_settings_validation(kwargs):
    with pytest.raises(ValueError):
        QuadSettings(**kwargs)


def test_bad_lower_limit():
    with pytest.raises(ValueError):
        integrate_tail(lambda t, u: t, 1.0)
