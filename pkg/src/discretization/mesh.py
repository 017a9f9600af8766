#!/usr/bin/env python3
"""
Spatial Mesh - Uniform grid, Dirichlet grid functions and discrete operators
"""

from dataclasses import dataclass
from typing import Callable

import numpy as np


@dataclass(frozen=True)
class SpaceGrid:
    """Uniform grid x_i = a + i*h, i = 0..M"""
    a: float
    b: float
    big_m: int

    def __post_init__(self):
        if not self.b > self.a:
            raise ValueError(f"right endpoint must exceed left endpoint, got [{self.a}, {self.b}]")
        if int(self.big_m) != self.big_m or self.big_m < 2:
            raise ValueError(f"M must be an integer >= 2, got {self.big_m}")

    @property
    def h(self) -> float:
        return (self.b - self.a) / self.big_m

    @property
    def nodes(self) -> np.ndarray:
        return self.a + self.h * np.arange(self.big_m + 1)

    @property
    def interior(self) -> slice:
        return slice(1, self.big_m)

    def zeros(self) -> 'GridFunction':
        return GridFunction(self, np.zeros(self.big_m + 1))


@dataclass(frozen=True, eq=False)
class GridFunction:
    """Values u_0..u_M on a SpaceGrid"""
    grid: SpaceGrid
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.shape != (self.grid.big_m + 1,):
            raise ValueError(f"expected {self.grid.big_m + 1} values, got shape {values.shape}")
        object.__setattr__(self, 'values', values)

    def is_dirichlet(self) -> bool:
        return self.values[0] == 0.0 and self.values[-1] == 0.0

    def with_dirichlet(self) -> 'GridFunction':
        values = self.values.copy()
        values[0] = values[-1] = 0.0
        return GridFunction(self.grid, values)

    def _check(self, other: 'GridFunction'):
        if other.grid != self.grid:
            raise ValueError(f"grid mismatch: {self.grid} vs {other.grid}")

    def __add__(self, other: 'GridFunction') -> 'GridFunction':
        self._check(other)
        return GridFunction(self.grid, self.values + other.values)

    def __sub__(self, other: 'GridFunction') -> 'GridFunction':
        self._check(other)
        return GridFunction(self.grid, self.values - other.values)

    def __mul__(self, scalar: float) -> 'GridFunction':
        return GridFunction(self.grid, scalar * self.values)

    __rmul__ = __mul__


def sample(grid: SpaceGrid, fn: Callable[[np.ndarray], np.ndarray], dirichlet: bool = False) -> GridFunction:
    """
    Evaluate fn at the grid nodes

    Args:
        grid: Target grid
        fn: Vectorized function of x
        dirichlet: Force u_0 = u_M = 0 (members of the Dirichlet space)
    """
    values = np.broadcast_to(np.asarray(fn(grid.nodes), dtype=float), (grid.big_m + 1,)).copy()
    if dirichlet:
        values[0] = values[-1] = 0.0
    return GridFunction(grid, values)


def inner(u: GridFunction, v: GridFunction) -> float:
    """h * sum_{i=1}^{M-1} u_i v_i"""
    u._check(v)
    interior = u.grid.interior
    return float(u.grid.h * np.dot(u.values[interior], v.values[interior]))


def norm_l2(u: GridFunction) -> float:
    return float(np.sqrt(inner(u, u)))


def seminorm_h1(u: GridFunction) -> float:
    """Discrete H1 seminorm, differences over i = 1..M including both boundary halves"""
    slopes = np.diff(u.values) / u.grid.h
    return float(np.sqrt(u.grid.h * np.dot(slopes, slopes)))


def norm_inf(u: GridFunction) -> float:
    interior = u.values[u.grid.interior]
    return float(np.max(np.abs(interior))) if interior.size else 0.0


def delta_x2(u: GridFunction) -> GridFunction:
    """Second difference on interior nodes, zeros in the boundary slots"""
    values = np.zeros_like(u.values)
    values[1:-1] = (u.values[2:] - 2.0 * u.values[1:-1] + u.values[:-2]) / u.grid.h ** 2
    return GridFunction(u.grid, values)


def apply_compact(u: GridFunction) -> GridFunction:
    """(u_{i-1} + 10 u_i + u_{i+1}) / 12 inside, boundary values copied"""
    values = u.values.copy()
    values[1:-1] = (u.values[:-2] + 10.0 * u.values[1:-1] + u.values[2:]) / 12.0
    return GridFunction(u.grid, values)


def norm_A(u: GridFunction) -> float:
    """sqrt(<A u, u>)"""
    return float(np.sqrt(inner(apply_compact(u), u)))
