#!/usr/bin/env python3
"""
L1 comparison scheme tests
"""

import math

import numpy as np
import pytest

from discretization import FractionalParams, SpaceGrid
from problems import manufactured_case, zero_problem
from schemes import FixedPointError, L1Config, L1Scheme, NonlinearityMode, l1_weights


def make_l1(problem, alpha, big_n, big_m, mode=NonlinearityMode.CENTRAL, **kwargs):
    params = FractionalParams(alpha=alpha, tau=problem.final_time / big_n, big_n=big_n)
    config = L1Config(params, SpaceGrid(problem.a, problem.b, big_m), problem, nonlinearity_mode=mode, **kwargs)
    return L1Scheme(config)


def rate(coarse, fine):
    return math.log2(coarse / fine)


# ---------------------------------------------------------------------------
# weights
# ---------------------------------------------------------------------------

@pytest.mark.parametrize('alpha', [1.1, 1.5, 1.9])
def test_weights(alpha):
    weights = l1_weights(alpha, 50)
    assert len(weights) == 50
    assert weights[0] == pytest.approx(1.0, rel=1e-15)
    assert np.all(weights > 0)
    assert np.all(np.diff(weights) < 0)
    assert weights.sum() == pytest.approx(50 ** (2 - alpha), rel=1e-13)


def test_weight_example():
    assert l1_weights(1.5, 3)[1] == pytest.approx(math.sqrt(2.0) - 1.0, rel=1e-14)


@pytest.mark.parametrize('alpha, big_n', [(1.0, 5), (2.0, 5), (1.5, 0)])
def test_weights_rejected(alpha, big_n):
    with pytest.raises(ValueError):
        l1_weights(alpha, big_n)


def test_config_validation():
    problem = zero_problem()
    params = FractionalParams(alpha=1.5, tau=0.25, big_n=4)
    grid = SpaceGrid(0.0, 1.0, 4)
    with pytest.raises(ValueError):
        L1Config(params, grid, problem, fp_tol=0.0)
    with pytest.raises(ValueError):
        L1Config(params, grid, problem, fp_max_iter=0)
    config = L1Config(params, grid, problem)
    assert config.alpha == 1.5
    assert config.tau == 0.25
    assert config.big_n == 4
    assert config.nonlinearity_mode is NonlinearityMode.CENTRAL


# ---------------------------------------------------------------------------
# stepping
# ---------------------------------------------------------------------------

@pytest.mark.parametrize('mode', list(NonlinearityMode))
def test_zero_problem(mode):
    levels, e2, reports = make_l1(zero_problem(), 1.5, 10, 8, mode).run()
    assert np.all(levels == 0.0)
    assert e2 == 0.0
    assert all(r.iterations == 1 for r in reports)
    assert all(r.residual_inf == 0.0 for r in reports)


def test_lagged_single_solve():
    result = make_l1(manufactured_case(1, 1.4), 1.4, 20, 20, NonlinearityMode.LAGGED).run()
    assert result.total_iterations == 20
    assert not result.breaches


def test_central_iterates():
    result = make_l1(manufactured_case(1, 1.4), 1.4, 20, 20).run()
    assert all(r.iterations > 1 for r in result.reports)
    assert all(r.fixed_point_gap <= 1e-12 for r in result.reports)
    assert not result.breaches


def test_fixed_point_failure():
    stepper = make_l1(manufactured_case(2, 1.5), 1.5, 10, 10, fp_tol=1e-300, fp_max_iter=2)
    with pytest.raises(FixedPointError) as info:
        stepper.run()
    assert info.value.step == 0
    assert info.value.iterations == 2
    assert info.value.gap > 0


@pytest.fixture(scope='module')
def coarse_central():
    alpha = 1.8
    return make_l1(manufactured_case(2, alpha), alpha, 20, 1000).run()


def test_measured_error(coarse_central):
    assert coarse_central.e2 == pytest.approx(1.4770e-02, rel=5e-3)


@pytest.mark.xfail(reason="L1 central errors run 9-14% above the reference column; see DESIGN.md", strict=False)
def test_reported_error(coarse_central):
    assert coarse_central.e2 == pytest.approx(1.3562e-02, rel=1e-2)


def test_lagged_not_faster_converging():
    alpha = 1.8
    problem = manufactured_case(2, alpha)
    errors = {mode: [make_l1(problem, alpha, big_n, 1000, mode).run().e2 for big_n in (20, 40, 80)]
              for mode in NonlinearityMode}
    central = rate(*errors[NonlinearityMode.CENTRAL][1:])
    lagged = rate(*errors[NonlinearityMode.LAGGED][1:])
    assert lagged <= central <= 2 * (3 - alpha)
    assert rate(*errors[NonlinearityMode.CENTRAL][:2]) == pytest.approx(1.0895, abs=0.05)
