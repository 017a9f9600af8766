#!/usr/bin/env python3
"""
Linearized Scheme - Second order in time, f evaluated at the known level

The fractional derivative is discretized at the shifted points t_{n+theta},
theta = (3-alpha)/2, and averaged back to t_n. Each step is one tridiagonal
solve. The compact variant wraps the time terms, f and p with
A = (1, 10, 1)/12 for fourth order in space.
"""

import logging
import time
from typing import Any, Dict, Tuple

import numpy as np

from discretization.coeffs import CoefficientTable, build_table
from discretization.mesh import GridFunction, apply_compact, delta_x2
from discretization.trisolve import TridiagonalSystem
from .base import SchemeConfig, SchemeState, StepReport, TimeStepper, Variant
from .oracle import first_level_residual, linearized_residual
from .registry import SchemeRegistry

logger = logging.getLogger(__name__)


def weighted_level(levels: np.ndarray, psi: np.ndarray, theta: float, tau: float, k: int) -> np.ndarray:
    """
    w^k for k >= 1

    w^k = (3/2-theta)[theta u^k + (1-theta) u^{k-1}] + (theta-1/2)[theta u^{k-1} + (1-theta) u^{k-2}],
    where w^1 takes u^{-1} = u^1 - 2 tau psi.
    """
    if k < 1:
        raise ValueError(f"w^k is defined for k >= 1, got {k}")
    before_last = levels[1] - 2.0 * tau * psi if k == 1 else levels[k - 2]
    return ((1.5 - theta) * (theta * levels[k] + (1.0 - theta) * levels[k - 1])
            + (theta - 0.5) * (theta * levels[k - 1] + (1.0 - theta) * before_last))


@SchemeRegistry.register("linearized")
class LinearizedScheme(TimeStepper):
    """
    Implicit linearized scheme for both spatial variants

    Writing V_{-1} = psi, V_0 = (2-2theta) delta_t u^{1/2} + (2theta-1) psi and
    V_k = (2-2theta) delta_t u^{k+1/2} + (2theta-1) delta_that u^k (k >= 1),
    the time side of step n is sum_{j=0}^{n} d_{n-j}^{(n+1)} (V_j - V_{j-1}).
    Only V_n holds u^{n+1}, with coefficient (3/2-theta)/tau, so the diagonal
    gains d_0^{(n+1)} (3/2-theta)/tau. On the space side w^{n+1} carries u^{n+1}
    with weight (3/2-theta) theta, halved by the average (w^{n+1}+w^n)/2.
    """

    def __init__(self, config: SchemeConfig, table: CoefficientTable = None, **overrides):
        super().__init__(config, **overrides)
        self.table = table or build_table(config.params)
        if self.table.params != config.params:
            raise ValueError(f"coefficient table built for {self.table.params}, run uses {config.params}")
        self.theta = config.params.theta
        self.compact = config.variant is Variant.COMPACT
        # u^{n+1} weight in (w^{n+1} + w^n)/2
        self.kappa = 0.5 * self.theta * (1.5 - self.theta)

    def get_default_params(self) -> Dict[str, Any]:
        return {
            'verify': True,  # evaluate the residual oracle after each step
        }

    def start(self, state: SchemeState) -> Tuple[np.ndarray, StepReport]:
        """
        Explicit first level

        u^1 = phi + tau psi + tau/(2 d_0^(1)) [(phi_xx + theta tau psi_xx) - f(phi + theta tau psi) + p(x, theta tau)]
        """
        begin = time.perf_counter()
        tau, theta = self.tau, self.theta
        x = self.grid.nodes
        phi, psi = state.levels[0], state.psi.values

        shifted = self.problem.phi(x) + theta * tau * self.problem.psi(x)
        bracket = (self.problem.phi_xx(x) + theta * tau * self.problem.psi_xx(x)
                   - self.problem.f(shifted) + self.problem.source(x, theta * tau))
        values = phi + tau * psi + tau / (2.0 * self.table.d(0, 0)) * bracket
        values[0] = values[-1] = 0.0

        report = StepReport(n=0, residual_inf=0.0, assembly_time=time.perf_counter() - begin, solve_time=0.0)
        return values, report

    def _velocity_increments(self, state: SchemeState) -> Tuple[np.ndarray, np.ndarray]:
        """
        Known part of the time side

        Returns:
            V_{-1}..V_{n-1} stacked as rows, and the u^{n+1}-free part of V_n
        """
        n, tau, theta = state.n, self.tau, self.theta
        u, psi = state.levels[:n + 1], state.psi.values

        velocities = np.empty((n + 1, u.shape[1]))
        velocities[0] = psi
        velocities[1] = (2.0 - 2.0 * theta) * (u[1] - u[0]) / tau + (2.0 * theta - 1.0) * psi
        if n > 1:
            velocities[2:] = ((2.0 - 2.0 * theta) * (u[2:] - u[1:n]) / tau
                              + (2.0 * theta - 1.0) * (u[2:] - u[:n - 1]) / (2.0 * tau))

        last_known = -(2.0 - 2.0 * theta) * u[n] / tau - (2.0 * theta - 1.0) * u[n - 1] / (2.0 * tau)
        return velocities, last_known

    def assemble(self, state: SchemeState) -> TridiagonalSystem:
        n = state.n
        if n < 1:
            raise ValueError("the implicit step starts at n=1; use start() for the first level")
        tau, theta, h = self.tau, self.theta, self.grid.h
        levels, psi = state.levels, state.psi.values

        d_row = self.table.d_row(n)
        velocities, last_known = self._velocity_increments(state)

        # sum_{j=0}^{n-1} d_{n-j} (V_j - V_{j-1}) + d_0 (V_n^known - V_{n-1})
        increments = np.diff(velocities, axis=0)
        history = d_row[n:0:-1] @ increments
        time_known = history + d_row[0] * (last_known - velocities[-1])
        time_diag = d_row[0] * (1.5 - theta) / tau

        # (w^{n+1} + w^n)/2 without its u^{n+1} part
        w_next_known = ((1.5 - theta) * (1.0 - theta) * levels[n]
                        + (theta - 0.5) * (theta * levels[n] + (1.0 - theta) * levels[n - 1]))
        w_now = weighted_level(levels, psi, theta, tau, n)
        diffusion = delta_x2(GridFunction(self.grid, 0.5 * (w_next_known + w_now))).values

        x = self.grid.nodes
        forcing = self.problem.source(x, n * tau) - self.problem.f(levels[n]) - time_known
        if self.compact:
            forcing = apply_compact(GridFunction(self.grid, forcing)).values
            lower = time_diag / 12.0 - self.kappa / h ** 2
            diag = 10.0 * time_diag / 12.0 + 2.0 * self.kappa / h ** 2
        else:
            lower = -self.kappa / h ** 2
            diag = time_diag + 2.0 * self.kappa / h ** 2

        rhs = (forcing + diffusion)[1:-1]
        return TridiagonalSystem.constant(lower, diag, lower, rhs)

    def residual(self, state: SchemeState) -> float:
        if state.n == 1:
            return first_level_residual(self.table, self.grid, self.problem, state.levels, state.psi.values)
        return linearized_residual(self.table, self.grid, self.problem, self.compact,
                                   state.levels, state.psi.values, state.n - 1)
