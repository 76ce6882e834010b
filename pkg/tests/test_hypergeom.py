import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from saddletower.errors import BadCError, DegenerateDegreeError, ZeroC2Error
from saddletower.forces import force
from saddletower.poly.hypergeom import (
    four_end_config,
    hypergeom_recurrence_matrix,
    hypergeom_rigidity_recurrence,
    hypergeometric_coefficient,
    hypergeometric_ode_residual,
    hypergeometric_poly,
    n1_config,
    n1_embedding_flags,
    pochhammer,
)
from saddletower.poly.polynomial import ComplexPolynomial, poly_roots


def test_pochhammer():
    assert pochhammer(3, 0) == 1
    assert pochhammer(3, 2) == 12
    assert pochhammer(-2, 3) == 0


def test_hypergeometric_example():
    np.testing.assert_allclose(hypergeometric_poly(2, -1.5, 0.5).coeffs, [1, 6, 1])


@pytest.mark.parametrize("n,b,c", [(2, -1.5, 0.5), (3, -2.25, 0.25), (5, -4.5, 0.5), (4, 0.7, 2.3)])
def test_coefficients_match_closed_form(n, b, c):
    P = hypergeometric_poly(n, b, c)
    ref = [hypergeometric_coefficient(n, b, c, k) for k in range(n + 1)]
    np.testing.assert_allclose(P.coeffs.real, ref, rtol=1e-12)


@pytest.mark.parametrize("n,b,c", [(2, -1.5, 0.5), (3, -2.25, 0.25), (5, -4.5, 0.5), (6, 1.3, 0.4)])
def test_ode_satisfied(n, b, c):
    P = hypergeometric_poly(n, b, c)
    R = hypergeometric_ode_residual(P, -n, b, c)
    assert R.norm() <= 1e-12 * max(1, P.norm()) * n**2


def test_bad_c_and_degenerate_degree():
    with pytest.raises(BadCError):
        hypergeometric_poly(3, -1.5, -1)
    with pytest.raises(BadCError):
        hypergeometric_poly(3, -1.5, 0)
    with pytest.raises(DegenerateDegreeError):
        hypergeometric_poly(3, -1, 0.5)


@pytest.mark.parametrize("n", [2, 3, 5])
@pytest.mark.parametrize("c", [0.25, 0.5, 0.8])
def test_symmetric_roots_reciprocal(n, c):
    b = 1 - n - c
    r = poly_roots(hypergeometric_poly(n, b, c))
    # z -> 1/z flips the sign of log|z|: sorted values must be antisymmetric
    a = np.sort(np.log(np.abs(r)))
    np.testing.assert_allclose(a, -a[::-1], atol=1e-9)
    inv = 1 / r
    d = np.abs(r[:, None] - inv[None, :]).min(axis=1)
    assert np.all(d < 1e-9 * np.maximum(1, np.abs(r)))


@pytest.mark.parametrize("n,b,c", [(2, -1.5, 0.5), (3, -2.5, 0.5), (5, -4.3, 0.3), (4, 0.5, 1.5)])
def test_chu_vandermonde(n, b, c):
    P = hypergeometric_poly(n, b, c)
    assert P(1.0) == pytest.approx(pochhammer(c - b, n) / pochhammer(c, n), rel=1e-12)


def test_four_end_config_roots_of_unity():
    for n in range(1, 13):
        cfg = four_end_config(n)
        np.testing.assert_allclose(cfg.nodes[0] ** n, 1, atol=1e-13)
        assert force(cfg).max_abs_force < 1e-12


def test_four_end_config_theta_gap():
    cfg = four_end_config(3, theta_gap=0.7)
    assert cfg.theta_left[0] - cfg.theta_right[0] == pytest.approx(0.7)
    assert force(cfg).max_abs_force < 1e-12


def test_n1_config_example():
    cfg = n1_config(2, -1.5, 0.5)
    np.testing.assert_allclose(np.sort(cfg.nodes[0].real), [-3 - 2 * math.sqrt(2), -3 + 2 * math.sqrt(2)])
    np.testing.assert_allclose(cfg.theta_left, [0, -0.5, -2.5], atol=1e-14)
    np.testing.assert_allclose(cfg.theta_right, [2, 1.5, -0.5], atol=1e-14)
    assert force(cfg).max_abs_force < 1e-12


def test_n1_config_zero_c2():
    with pytest.raises(ZeroC2Error):
        n1_config(2, 1.5, 0.5)


def test_n1_embedding_flags():
    flags = n1_embedding_flags(2, -1.5, 0.5)
    assert set(flags) == {"t10>t20", "t1inf>t2inf", "t20>t30", "t2inf>t3inf"}
    cfg = n1_config(2, -1.5, 0.5)
    left, right = cfg.theta_left, cfg.theta_right
    assert flags["t10>t20"] == (left[0] > left[1])
    assert flags["t1inf>t2inf"] == (right[0] > right[1])
    assert flags["t20>t30"] == (left[1] > left[2])
    assert flags["t2inf>t3inf"] == (right[1] > right[2])


def test_recurrence_matrix_is_linearization():
    n, b, c = 4, 0.7, 1.9
    P = hypergeometric_poly(n, b, c)
    M = hypergeom_recurrence_matrix(n, b, c)
    da = np.array([0.3, -0.2, 0.5, 0.1])
    dP = ComplexPolynomial(np.r_[da, 0.0], trim=False)
    R = hypergeometric_ode_residual(dP, -n, b, c)
    np.testing.assert_allclose(R.coeffs[:n].real, M @ da, atol=1e-12)
    assert P.degree == n


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 6), st.integers(-6, 2), st.integers(-6, 2), st.booleans())
def test_rigidity_recurrence_rule(n, bi, ci, shift):
    b = bi + (0.5 if shift else 0.0)
    c = ci + 0.25
    expect = not (float(b).is_integer() and -(n - 1) <= b <= 0)
    assert hypergeom_rigidity_recurrence(n, b, c) == expect
    c_int = float(ci)
    expect_int = expect and not (-(n - 1) <= c_int <= 0)
    assert hypergeom_rigidity_recurrence(n, b, c_int) == expect_int
