import json
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.special import gammaln

from genhilbert.measures import MeasureSpec, carleson_report
from genhilbert.operator import (
    OperatorConfig,
    apply_hankel,
    apply_integral,
    duality_pairing,
    equivalence_residual,
    gamma_ratio_coeffs,
    hankel_matrix,
    definedness_gate,
)
from genhilbert.spaces import monomial, test_fa as make_fa, test_ga_log as make_log

CORPUS = [MeasureSpec.atom(0.5), MeasureSpec.power(2.0), MeasureSpec.power(3.0)]


@pytest.mark.parametrize("alpha", [0.5, 1.0, 2.0, 3.0, 7.5])
def test_gamma_ratio_matches_mpmath(alpha):
    from mpmath import mp, gamma, factorial

    mp.dps = 40
    c = gamma_ratio_coeffs(alpha, 2000)
    for n in (0, 1, 17, 500, 1503, 2000):
        ref = float(gamma(n + alpha) / (factorial(n) * gamma(alpha)))
        assert c[n] == pytest.approx(ref, rel=1e-13)


def test_gamma_ratio_special_values():
    np.testing.assert_array_equal(gamma_ratio_coeffs(1.0, 50), np.ones(51))
    np.testing.assert_allclose(gamma_ratio_coeffs(2.0, 50), np.arange(1, 52), rtol=1e-15)


def test_gamma_ratio_log_domain_for_huge_alpha():
    alpha, N = 300.0, 2000
    logs = gamma_ratio_coeffs(alpha, N, log=True)
    n = np.arange(N + 1)
    ref = gammaln(n + alpha) - gammaln(n + 1) - gammaln(alpha)
    np.testing.assert_allclose(logs, ref, rtol=1e-11, atol=1e-9)
    vals = gamma_ratio_coeffs(alpha, N)
    assert np.all(np.isfinite(vals[:200]))


def test_classical_hilbert_entries():
    H = hankel_matrix(MeasureSpec.lebesgue(), OperatorConfig(1.0, N=1024))
    n = np.arange(1025)
    E = H.entries
    ref = 1.0 / (np.add.outer(n, n) + 1)
    assert np.max(np.abs(E - ref) / ref) < 1e-14
    assert H.entry(3, 4) == pytest.approx(1 / 8, rel=1e-15)


def test_atom_entries():
    H = hankel_matrix(MeasureSpec.atom(0.5), OperatorConfig(2.0, N=8))
    assert H.entry(2, 3) == pytest.approx(3 * 0.5**5, rel=1e-15)


@settings(max_examples=15, deadline=None)
@given(st.floats(0.3, 5.0), st.floats(0.5, 4.0))
def test_entries_positive_and_hankel_symmetric(gamma, alpha):
    H = hankel_matrix(MeasureSpec.power(gamma), OperatorConfig(alpha, N=32))
    E = H.entries
    assert np.all(E > 0)
    scaled = E / H.coeffs[:, None]
    np.testing.assert_allclose(scaled, scaled.T, rtol=1e-15)


def test_apply_hankel_matches_dense_product():
    H = hankel_matrix(MeasureSpec.power(2.0), OperatorConfig(2.0, N=64))
    f = make_fa(0.5, 1.0)
    b = apply_hankel(H, f).coeffs
    np.testing.assert_allclose(b, H.entries @ f.padded(64), rtol=1e-13)


def test_apply_hankel_rejects_long_series():
    H = hankel_matrix(MeasureSpec.lebesgue(), OperatorConfig(1.0, N=8))
    with pytest.raises(ValueError, match="exceeds"):
        apply_hankel(H, make_fa(0.5, 1.0))


def test_hankel_coefficients_are_taylor_coefficients_of_integral():
    # sample I f on |z| = rho and recover the Taylor coefficients by FFT
    m, alpha, f = MeasureSpec.power(2.0), 2.0, make_fa(0.5, 1.0)
    rho, M = 0.5, 64
    z = rho * np.exp(2j * np.pi * np.arange(M) / M)
    coeff = np.fft.fft(apply_integral(m, alpha, f, z)) / M / rho ** np.arange(M)
    b = apply_hankel(hankel_matrix(m, OperatorConfig(alpha, N=128)), f).coeffs
    np.testing.assert_allclose(coeff[:20], b[:20], rtol=0, atol=1e-8)


def test_apply_integral_closed_form():
    # int_0^1 (1 - t/2)^-1 dt = 2 log 2
    val = apply_integral(MeasureSpec.lebesgue(), 1.0, monomial(0), 0.5)
    assert val == pytest.approx(2 * math.log(2), rel=1e-14)
    # atom: f(t) (1 - t z)^-alpha
    val = apply_integral(MeasureSpec.atom(0.5), 3.0, monomial(1), 0.2j)
    assert val == pytest.approx(0.5 * (1 - 0.1j) ** -3, rel=1e-15)
    with pytest.raises(ValueError):
        apply_integral(MeasureSpec.lebesgue(), 1.0, monomial(0), 1.0)


@pytest.mark.parametrize("m", CORPUS, ids=lambda m: m.label)
@pytest.mark.parametrize("alpha", [0.5, 2.0])
def test_equivalence_residual_small_and_shrinking(m, alpha):
    f = make_fa(0.5, 1.0)
    coarse = equivalence_residual(m, OperatorConfig(alpha, N=64), f)
    fine = equivalence_residual(m, OperatorConfig(alpha, N=256), f)
    assert fine < 1e-12
    assert fine <= coarse


def test_gate_warns_but_computes():
    m = MeasureSpec.lebesgue()
    gate = carleson_report(m, 0.0, 2.0)  # Lebesgue is not 2-Carleson
    with pytest.warns(RuntimeWarning, match="Carleson"):
        res = equivalence_residual(m, OperatorConfig(2.0, N=128), monomial(1), gate=gate)
    assert np.isfinite(res)


def test_definedness_gate_exponents():
    assert definedness_gate(MeasureSpec.lebesgue(), 0.5).s == 2.0
    assert definedness_gate(MeasureSpec.lebesgue(), 2.0).s == 1.0
    assert not definedness_gate(MeasureSpec.lebesgue(), 1.0).divergent


@pytest.mark.parametrize("alpha", [1.5, 2.0, 3.0])
@pytest.mark.parametrize("g", [monomial(0), monomial(1), make_log(0.9)], ids=["1", "z", "log"])
def test_duality_identity(alpha, g):
    m = MeasureSpec.power(2.0)
    lhs, rhs = duality_pairing(m, OperatorConfig(alpha, N=256), make_fa(0.5, 1.0), g, 0.9)
    assert abs(lhs - rhs) <= 1e-9 * (1 + abs(rhs))


def test_duality_atom_closed_form():
    # f = 1, g = 1: rhs = mu([0,1)) / (alpha - 1)
    lhs, rhs = duality_pairing(MeasureSpec.atom(0.5, 2.0), OperatorConfig(3.0, N=64),
                               monomial(0), monomial(0), 0.5)
    assert rhs == pytest.approx(1.0)
    assert lhs == pytest.approx(1.0, rel=1e-12)


def test_duality_validation():
    cfg = OperatorConfig(1.0, N=8)
    with pytest.raises(ValueError, match="alpha > 1"):
        duality_pairing(MeasureSpec.lebesgue(), cfg, monomial(0), monomial(0), 0.5)


def test_exports():
    H = hankel_matrix(MeasureSpec.lebesgue(), OperatorConfig(1.0, N=3))
    rows = H.to_csv().splitlines()
    assert rows[0] == "1,0.5,0.333333333333333,0.25"
    data = json.loads(H.to_json())
    assert data["order"] == 3 and len(data["moments"]) == 7
    big = hankel_matrix(MeasureSpec.lebesgue(), OperatorConfig(1.0, N=65))
    with pytest.raises(ValueError):
        big.to_csv()


@pytest.mark.parametrize("kwargs", [{"alpha": 0.0}, {"alpha": 1.0, "N": 0},
                                    {"alpha": 1.0, "r_list": (1.0,)}])
def test_config_validation(kwargs):
    with pytest.raises(ValueError):
        OperatorConfig(**kwargs)
