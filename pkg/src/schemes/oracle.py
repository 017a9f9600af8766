#!/usr/bin/env python3
"""
Residual Oracle - Re-evaluate the discrete equations at computed levels

Each function rebuilds one displayed equation term by term from difference
quotients of the stored levels (no reuse of the assembly algebra) and returns
the interior max-norm of LHS - RHS.
"""

import numpy as np

from discretization.coeffs import CoefficientTable
from discretization.mesh import GridFunction, SpaceGrid, apply_compact, delta_x2
from problems.base import ProblemSpec


def _interior_max(values: np.ndarray) -> float:
    interior = values[1:-1]
    return float(np.max(np.abs(interior))) if interior.size else 0.0


def _w(levels: np.ndarray, psi: np.ndarray, theta: float, tau: float, k: int) -> np.ndarray:
    """w^k = c_0 u^k + c_1 u^{k-1} + c_2 u^{k-2}, with u^{-1} = u^1 - 2 tau psi"""
    c_0 = theta * (1.5 - theta)
    c_1 = (1.0 - theta) * (1.5 - theta) + theta * (theta - 0.5)
    c_2 = (1.0 - theta) * (theta - 0.5)
    two_back = levels[k - 2] if k >= 2 else levels[1] - 2.0 * tau * psi
    return c_0 * levels[k] + c_1 * levels[k - 1] + c_2 * two_back


def first_level_residual(table: CoefficientTable, grid: SpaceGrid, problem: ProblemSpec,
                         levels: np.ndarray, psi: np.ndarray) -> float:
    """2 d_0^(1) (delta_t u^(1/2) - psi) = (phi_xx + theta tau psi_xx) - f(phi + theta tau psi) + p^theta"""
    tau, theta = table.params.tau, table.params.theta
    x = grid.nodes
    lhs = 2.0 * table.d(0, 0) * ((levels[1] - levels[0]) / tau - psi)
    shifted = problem.phi(x) + theta * tau * problem.psi(x)
    rhs = (problem.phi_xx(x) + theta * tau * problem.psi_xx(x)
           - problem.f(shifted) + problem.source(x, theta * tau))
    return _interior_max(lhs - rhs)


def linearized_residual(table: CoefficientTable, grid: SpaceGrid, problem: ProblemSpec, compact: bool,
                        levels: np.ndarray, psi: np.ndarray, n: int) -> float:
    """
    Residual of the weighted fractional equation that produced u^{n+1}, n >= 1

    LHS = sum_{k=1}^n d_{n-k}^{(n+1)} [(2-2theta)(delta_t u^{k+1/2} - delta_t u^{k-1/2})
                                       + (2theta-1)(delta_that u^k - delta_that u^{k-1})]
          + d_n^{(n+1)} (2-2theta)(delta_t u^{1/2} - psi)
    RHS = delta_x^2 ((w^{n+1} + w^n)/2) - f(u^n) + p^n
    The compact form applies A to LHS, f(u^n) and p^n.
    """
    if n < 1:
        raise ValueError(f"weighted equation starts at n=1, got {n}")
    tau, theta = table.params.tau, table.params.theta
    u = levels[:n + 2]

    # delta_t u^{k+1/2}, k = 0..n
    forward = (u[1:] - u[:-1]) / tau
    # delta_that u^k, k = 0..n with u^{-1} = u^1 - 2 tau psi
    previous = np.vstack([(u[1] - 2.0 * tau * psi)[None, :], u[:-2]])
    central = (u[1:] - previous) / (2.0 * tau)

    terms = ((2.0 - 2.0 * theta) * (forward[1:] - forward[:-1])
             + (2.0 * theta - 1.0) * (central[1:] - central[:-1]))
    # d_{n-1}, ..., d_0 for k = 1..n
    weights = table.d_row(n)[n - 1::-1]
    lhs = weights @ terms + table.d(n, n) * (2.0 - 2.0 * theta) * (forward[0] - psi)

    w_next = _w(levels, psi, theta, tau, n + 1)
    w_now = _w(levels, psi, theta, tau, n)
    diffusion = delta_x2(GridFunction(grid, 0.5 * (w_next + w_now))).values

    x = grid.nodes
    forcing = problem.source(x, n * tau) - problem.f(u[n])
    if compact:
        lhs = apply_compact(GridFunction(grid, lhs)).values
        forcing = apply_compact(GridFunction(grid, forcing)).values
    return _interior_max(lhs - diffusion - forcing)


def l1_residual(a: np.ndarray, mu: float, tau: float, grid: SpaceGrid, problem: ProblemSpec,
                levels: np.ndarray, psi: np.ndarray, n: int, central: bool) -> float:
    """
    Residual of the L1 comparison equation for u^{n+1}, n >= 0

    (1/mu)[a_0 delta_t u^{n+1/2} - sum_{k=1}^{n} (a_{n-k} - a_{n-k+1}) delta_t u^{k-1/2} - a_n psi]
        = delta_x^2 u^{n+1/2} - f^{n+1/2} + p^{n+1/2}
    """
    u_next, u_now = levels[n + 1], levels[n]
    lhs = a[0] * (u_next - u_now) / tau - a[n] * psi
    for k in range(1, n + 1):
        lhs = lhs - (a[n - k] - a[n - k + 1]) * (levels[k] - levels[k - 1]) / tau
    lhs = lhs / mu

    half = 0.5 * (u_next + u_now)
    nonlinear = 0.5 * (problem.f(u_next) + problem.f(u_now)) if central else problem.f(u_now)
    rhs = (delta_x2(GridFunction(grid, half)).values - nonlinear
           + problem.source(grid.nodes, (n + 0.5) * tau))
    return _interior_max(lhs - rhs)
