#!/usr/bin/env python3
"""
Shared fixtures for the solver tests
"""

import sys
from pathlib import Path

ROOT = Path(__file__).parent.parent
sys.path.insert(0, str(ROOT / 'src'))
sys.path.insert(0, str(ROOT))

import numpy as np
import pytest

from discretization import FractionalParams, SpaceGrid, build_table
from problems import manufactured_case, zero_problem


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def unit_grid():
    return SpaceGrid(0.0, 1.0, 16)


@pytest.fixture
def small_table():
    return build_table(FractionalParams(alpha=1.5, tau=1.0 / 40, big_n=40))


@pytest.fixture
def zero():
    return zero_problem()


@pytest.fixture(params=[1, 2, 3])
def case_id(request):
    return request.param


@pytest.fixture
def sine_gordon():
    return manufactured_case(2, 1.5)
