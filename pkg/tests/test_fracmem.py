import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from weylopt.fracmem import (
    ConfigError,
    Constant,
    DomainError,
    Identity,
    Logarithmic,
    Power,
    Rational,
    gamma,
    kernel_coefficients,
    kernel_quadrature_oracle,
    psi_eval,
)

SCALES = [Identity(), Logarithmic(), Power(2.0), Power(0.5)]
WEIGHTS = [Constant(), Rational(0.1), Rational(2.0)]


@pytest.mark.parametrize("x, expected", [(1.0, 1.0), (0.5, math.sqrt(math.pi)), (5.0, 24.0), (2.0, 1.0), (3.0, 2.0)])
def test_gamma_known_values(x, expected):
    assert gamma(x) == pytest.approx(expected, rel=1e-12)


def test_gamma_against_stdlib_on_unit_range():
    xs = np.linspace(1e-3, 3.0, 3001)
    rel = max(abs(gamma(x) / math.gamma(x) - 1.0) for x in xs)
    assert rel <= 1e-10


@pytest.mark.parametrize("x", [0.0, -1.0, -0.5, float("nan"), float("inf")])
def test_gamma_domain(x):
    with pytest.raises(DomainError):
        gamma(x)


def test_psi_examples():
    assert psi_eval(Logarithmic(), 0) == 0.0
    assert psi_eval(Identity(), 3.5) == 3.5
    assert psi_eval(Logarithmic(), math.e - 1) == pytest.approx(1.0, rel=1e-15)
    assert psi_eval(Power(2.0), 2.0) == pytest.approx(8.0)
    with pytest.raises(DomainError):
        psi_eval(Identity(), -0.1)


@pytest.mark.parametrize("kind", SCALES)
def test_psi_zero_and_increasing(kind):
    a = np.linspace(0.0, 200.0, 2001)
    vals = kind.psi(a)
    assert vals[0] == 0.0
    assert np.all(np.diff(vals) > 0)


@pytest.mark.parametrize("w", WEIGHTS)
def test_weight_range(w):
    a = np.arange(0, 500, dtype=float)
    om = w.omega(a)
    assert om[0] == 1.0
    assert np.all((om > 0) & (om <= 1))


def test_alpha_one_identity_is_uniform():
    k = kernel_coefficients(1.0, Identity(), Constant(), 4, normalize=False)
    np.testing.assert_array_equal(k.coeffs, [1.0, 1.0, 1.0, 1.0])


def test_half_order_identity_sum():
    k = kernel_coefficients(0.5, Identity(), Constant(), 3, normalize=False)
    assert k.coeffs.sum() == pytest.approx(3**0.5 / gamma(1.5), rel=1e-14)


def test_log_rational_matches_quadrature():
    k = kernel_coefficients(0.5, Logarithmic(), Rational(0.1), 8, normalize=False)
    oracle = [kernel_quadrature_oracle(0.5, Logarithmic(), Rational(0.1), a) for a in range(8)]
    np.testing.assert_allclose(k.coeffs, oracle, rtol=1e-8, atol=0)


def test_oracle_examples():
    assert kernel_quadrature_oracle(1.0, Identity(), Constant(), 0) == pytest.approx(1.0, rel=1e-12)
    assert kernel_quadrature_oracle(0.5, Identity(), Constant(), 0) == pytest.approx(1 / gamma(1.5), rel=1e-10)
    closed = kernel_coefficients(0.7, Logarithmic(), Rational(0.05), 6, normalize=False).coeffs[5]
    assert kernel_quadrature_oracle(0.7, Logarithmic(), Rational(0.05), 5) == pytest.approx(closed, rel=1e-8)


@pytest.mark.parametrize("alpha", [0.1, 0.25, 0.5, 0.75, 0.9, 0.99])
@pytest.mark.parametrize("kind", [Identity(), Logarithmic(), Power(2.0)])
def test_closed_form_matches_oracle_all_ages(alpha, kind):
    k = kernel_coefficients(alpha, kind, Constant(), 64, normalize=False)
    oracle = np.array([kernel_quadrature_oracle(alpha, kind, Constant(), a) for a in range(64)])
    assert np.max(np.abs(k.coeffs - oracle) / oracle) <= 1e-8


@pytest.mark.parametrize("kind", SCALES)
@pytest.mark.parametrize("L", [1, 2, 10, 100])
@pytest.mark.parametrize("alpha", [0.1, 0.5, 0.9, 1.0])
def test_telescoping(kind, L, alpha):
    k = kernel_coefficients(alpha, kind, Constant(), L, normalize=False)
    expected = psi_eval(kind, L) ** alpha / gamma(alpha + 1)
    assert k.coeffs.sum() == pytest.approx(expected, rel=1e-12)


@settings(max_examples=200, deadline=None)
@given(
    alpha=st.floats(0.01, 0.999),
    L=st.integers(2, 300),
    kind=st.sampled_from([Identity(), Logarithmic()]),
    weight=st.sampled_from(WEIGHTS),
)
def test_monotone_decay(alpha, L, kind, weight):
    c = kernel_coefficients(alpha, kind, weight, L, normalize=False).coeffs
    assert np.all(np.diff(c) <= 0)


@settings(max_examples=200, deadline=None)
@given(
    alpha=st.floats(0.01, 1.0),
    L=st.integers(1, 500),
    kind=st.sampled_from(SCALES),
    weight=st.sampled_from(WEIGHTS),
)
def test_normalized_finite_and_sums_to_one(alpha, L, kind, weight):
    k = kernel_coefficients(alpha, kind, weight, L, normalize=True)
    assert k.normalized and k.window == L and len(k.coeffs) == L
    assert np.all(np.isfinite(k.coeffs)) and np.all(k.coeffs >= 0)
    assert abs(k.coeffs.sum() - 1.0) <= 1e-12


@pytest.mark.parametrize("alpha", [0.0, -0.2, 1.01])
def test_bad_alpha(alpha):
    with pytest.raises(ConfigError):
        kernel_coefficients(alpha, Logarithmic(), Constant(), 4)


@pytest.mark.parametrize("L", [0, -3, 2.5])
def test_bad_window(L):
    with pytest.raises(ConfigError):
        kernel_coefficients(0.5, Logarithmic(), Constant(), L)


def test_bad_kind_params():
    with pytest.raises(ConfigError):
        Power(0.0)
    with pytest.raises(ConfigError):
        Rational(-1.0)


def test_coefficients_are_immutable():
    k = kernel_coefficients(0.5, Logarithmic(), Constant(), 4)
    with pytest.raises(ValueError):
        k.coeffs[0] = 2.0
