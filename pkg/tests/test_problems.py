#!/usr/bin/env python3
"""
Problem definition tests - manufactured data consistency and the Caputo quadrature
"""

import math

import numpy as np
import pytest

from discretization.coeffs import gamma
from problems import (
    CASE_IDS,
    NONLINEARITIES,
    ProblemSpec,
    caputo_derivative,
    equation_residual,
    linear_case,
    manufactured_case,
    zero_problem,
)


def test_case_ids():
    assert CASE_IDS == (1, 2, 3)


def test_nonlinearity_values():
    cubic, sine_gordon, square_root = (NONLINEARITIES[k][1] for k in CASE_IDS)
    assert cubic(1.0) == pytest.approx(2.0)
    assert cubic(-2.0) == pytest.approx(-16.0)
    assert sine_gordon(math.pi / 2) == pytest.approx(1.0)
    assert square_root(2.0) == pytest.approx(3.0)
    assert square_root(0.0) == pytest.approx(math.sqrt(5.0))


@pytest.mark.parametrize('alpha', [1.2, 1.5, 1.8])
def test_manufactured_data(case_id, alpha):
    spec = manufactured_case(case_id, alpha)
    x = np.linspace(0.0, 1.0, 11)
    assert spec.alpha == alpha
    assert spec.has_exact
    assert spec.initial_mismatch(x) <= 1e-15
    np.testing.assert_allclose(spec.phi_xx(x), -np.pi ** 2 * np.sin(np.pi * x), atol=1e-13)
    np.testing.assert_array_equal(spec.psi_xx(x), 0.0)
    assert abs(spec.exact(0.0, 0.5)) <= 1e-15
    assert abs(spec.exact(1.0, 0.5)) <= 1e-15


@pytest.mark.parametrize('alpha', [1.2, 1.5, 1.8])
@pytest.mark.parametrize('x, t', [(0.25, 0.3), (0.5, 0.7), (0.8, 1.0)])
def test_equation_residual(case_id, alpha, x, t):
    spec = manufactured_case(case_id, alpha)
    assert abs(equation_residual(spec, x, t)) <= 1e-6


def test_caputo_of_power():
    # D^alpha t^4 = 24 / Gamma(5 - alpha) t^(4 - alpha)
    for alpha in (1.1, 1.5, 1.9):
        for t in (0.2, 1.0, 2.5):
            value = caputo_derivative(lambda s: 12.0 * s ** 2, t, alpha)
            assert value == pytest.approx(24.0 / gamma(5.0 - alpha) * t ** (4.0 - alpha), rel=1e-9)


def test_caputo_of_quadratic():
    # D^alpha t^2 = 2 / Gamma(3 - alpha) t^(2 - alpha)
    value = caputo_derivative(lambda s: 2.0, 0.6, 1.4)
    assert value == pytest.approx(2.0 / gamma(1.6) * 0.6 ** 0.6, rel=1e-10)


def test_caputo_at_zero():
    assert caputo_derivative(lambda s: 1.0, 0.0, 1.5) == 0.0


@pytest.mark.parametrize('alpha, t', [(1.0, 0.5), (2.0, 0.5), (1.5, -0.1)])
def test_caputo_rejects(alpha, t):
    with pytest.raises(ValueError):
        caputo_derivative(lambda s: 1.0, t, alpha)


@pytest.mark.parametrize('alpha', [1.2, 1.8])
def test_linear_case(alpha):
    spec = linear_case(alpha)
    x = np.linspace(0.0, 1.0, 9)
    np.testing.assert_array_equal(spec.f(spec.exact(x, 0.5)), 0.0)
    assert abs(equation_residual(spec, 0.4, 0.6)) <= 1e-6
    # same solution as the nonlinear cases, source without f(u)
    cubic = manufactured_case(1, alpha)
    np.testing.assert_allclose(spec.source(x, 0.6), cubic.source(x, 0.6) - cubic.f(cubic.exact(x, 0.6)), atol=1e-12)


def test_unknown_case():
    with pytest.raises(ValueError):
        manufactured_case(4, 1.5)
    with pytest.raises(ValueError):
        manufactured_case(1, 2.5)


def test_zero_problem():
    spec = zero_problem()
    x = np.linspace(0.0, 1.0, 5)
    assert spec.alpha is None
    assert spec.f(np.float64(0.0)) == 0.0
    np.testing.assert_array_equal(spec.source(x, 0.3), 0.0)
    np.testing.assert_array_equal(spec.phi(x), 0.0)
    assert spec.initial_mismatch(x) == 0.0


def test_residual_needs_exact():
    spec = zero_problem()
    with pytest.raises(ValueError):
        equation_residual(spec, 0.5, 0.5)


def test_problem_validation():
    zero = zero_problem()
    with pytest.raises(ValueError):
        ProblemSpec(name='bad', a=1.0, b=0.0, final_time=1.0, f=zero.f, source=zero.source,
                    phi=zero.phi, psi=zero.psi, phi_xx=zero.phi_xx, psi_xx=zero.psi_xx)
    with pytest.raises(ValueError):
        ProblemSpec(name='bad', a=0.0, b=1.0, final_time=0.0, f=zero.f, source=zero.source,
                    phi=zero.phi, psi=zero.psi, phi_xx=zero.phi_xx, psi_xx=zero.psi_xx)
