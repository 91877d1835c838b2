import numpy as np
import pytest
from numpy.testing import assert_allclose

from src.lab import polys
from src.lab.rational import RationalFn


def test_evaluation_and_derivatives():
    R = RationalFn.polynomial([-1.0, 0.0, 1.0])
    assert R(2.0) == pytest.approx(3.0)
    assert R.derivative(2.0) == pytest.approx(4.0)
    assert R.derivative(2.0, order=2) == pytest.approx(2.0)
    assert R.degree == 2 and R.is_polynomial


def test_quotient_derivative_matches_closed_form():
    R = RationalFn(np.array([1.0, 0.0, 1.0]), np.array([-3.0, 1.0]))  # (1 + z^2)/(z - 3)
    z = 0.3 + 0.4j
    d1 = (2 * z * (z - 3) - (1 + z ** 2)) / (z - 3) ** 2
    assert_allclose(R.derivative(z), d1, rtol=1e-13)
    h = 1e-4
    fd = (R.derivative(z + h) - R.derivative(z - h)) / (2 * h)
    assert_allclose(R.derivative(z, order=2), fd, rtol=1e-6)


def test_common_factor_is_rejected():
    with pytest.raises(ValueError, match="share a zero"):
        RationalFn(np.array([-1.0, 0.0, 1.0]), np.array([-1.0, 1.0]))


def test_reciprocal_scaled_and_infinity():
    R = RationalFn.polynomial([-1.0, 0.0, 1.0])
    g = R.reciprocal_scaled(4.0)
    z = np.array([0.5j, 2.0, -1.5 + 0.2j])
    assert_allclose(g(z) * R(z), 4.0)
    assert g.at_infinity() == 0
    assert np.isinf(R.at_infinity())
    assert RationalFn(np.array([1.0, 2.0]), np.array([3.0, 4.0])).at_infinity() == pytest.approx(0.5)


def test_power_and_conjugate_coefficients():
    R = RationalFn.polynomial([1j, 2.0])
    assert_allclose(R.power(3)(0.7), R(0.7) ** 3)
    Rs = R.conjugate_coefficients()
    z = 0.2 - 0.9j
    assert_allclose(Rs(z), np.conj(R(np.conj(z))))


def test_dict_form_keeps_coefficients():
    R = RationalFn(np.array([1.0, -2j]), np.array([0.5, 0.0, 1.0]))
    back = RationalFn.from_dict(R.to_dict())
    assert_allclose(back.num, R.num)
    assert_allclose(back.den, R.den)


def test_resultant_of_linear_factors():
    assert polys.resultant([-1.0, 1.0], [-2.0, 1.0], normalize=False) == pytest.approx(-1.0)
    assert abs(polys.resultant([-1.0, 0.0, 1.0], [1.0, 1.0])) < 1e-12


def test_circle_interpolation_recovers_coefficients():
    c = np.array([1.0, 2.0, 3.0])
    nodes = polys.circle_nodes(3, 2.0)
    assert_allclose(polys.interpolate_on_circle(np.polynomial.polynomial.polyval(nodes, c), 2.0), c, atol=1e-12)


def test_bivariate_helpers():
    a = np.array([[1.0, 1.0]])  # 1 + w
    b = np.array([[1.0], [1.0]])  # 1 + z
    prod = polys.polymul2d(a, b)
    assert_allclose(polys.bivar_eval(prod, 2.0, 3.0), 12.0)
    padded = polys.polyadd2d(prod, np.zeros((4, 4)))
    assert polys.trim2d(padded).shape == (2, 2)
    assert polys.trim(np.array([1.0, 2.0, 1e-20]), 1e-12).size == 2
    assert polys.degree(np.zeros(3)) == -1
