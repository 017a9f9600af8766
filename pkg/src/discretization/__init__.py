#!/usr/bin/env python3
"""
Discretization Module - Fractional weights, spatial grids and tridiagonal solves
"""

from .coeffs import FractionalParams, CoefficientTable, build_table, gamma
from .mesh import (
    SpaceGrid,
    GridFunction,
    sample,
    inner,
    norm_l2,
    seminorm_h1,
    norm_inf,
    norm_A,
    delta_x2,
    apply_compact,
)
from .trisolve import TridiagonalSystem, SingularSystemError, solve

__all__ = [
    'FractionalParams',
    'CoefficientTable',
    'build_table',
    'gamma',
    'SpaceGrid',
    'GridFunction',
    'sample',
    'inner',
    'norm_l2',
    'seminorm_h1',
    'norm_inf',
    'norm_A',
    'delta_x2',
    'apply_compact',
    'TridiagonalSystem',
    'SingularSystemError',
    'solve',
]
