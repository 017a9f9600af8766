#!/usr/bin/env python3
"""
L1 Reference Scheme - Classical L1 time discretization for comparison

Crank-Nicolson in space-time around t_{n+1/2}. The nonlinear term is either
the central average [f(u^{n+1}) + f(u^n)]/2, resolved by fixed-point sweeps,
or lagged to f(u^n) for a single linear solve per step.
"""

import logging
import time
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Tuple

import numpy as np

from discretization.coeffs import FractionalParams, gamma
from discretization.mesh import GridFunction, SpaceGrid, delta_x2
from discretization.trisolve import TridiagonalSystem, solve
from problems.base import ProblemSpec
from .base import SchemeState, StepReport, TimeStepper, validate_setup
from .oracle import l1_residual
from .registry import SchemeRegistry

logger = logging.getLogger(__name__)


class NonlinearityMode(Enum):
    CENTRAL = 'central'
    LAGGED = 'lagged'


class FixedPointError(RuntimeError):
    """Raised when the fixed-point sweeps do not settle"""

    def __init__(self, step: int, iterations: int, gap: float):
        super().__init__(f"fixed-point iteration at step {step} stalled after {iterations} sweeps, "
                         f"last iterate gap {gap:.3e}")
        self.step = step
        self.iterations = iterations
        self.gap = gap


@dataclass(frozen=True)
class L1Config:
    """Everything that fixes one L1 run"""
    params: FractionalParams
    grid: SpaceGrid
    problem: ProblemSpec
    nonlinearity_mode: NonlinearityMode = NonlinearityMode.CENTRAL
    fp_tol: float = 1e-12
    fp_max_iter: int = 200

    def __post_init__(self):
        validate_setup(self.params, self.grid, self.problem)
        if not self.fp_tol > 0:
            raise ValueError(f"fp_tol must be positive, got {self.fp_tol}")
        if self.fp_max_iter < 1:
            raise ValueError(f"fp_max_iter must be >= 1, got {self.fp_max_iter}")

    @property
    def alpha(self) -> float:
        return self.params.alpha

    @property
    def tau(self) -> float:
        return self.params.tau

    @property
    def big_n(self) -> int:
        return self.params.big_n


def l1_weights(alpha: float, big_n: int) -> np.ndarray:
    """a_k = (k+1)^(2-alpha) - k^(2-alpha), k = 0..N-1"""
    if not 1.0 < alpha < 2.0:
        raise ValueError(f"alpha must lie in (1, 2), got {alpha}")
    if big_n < 1:
        raise ValueError(f"need at least one weight, got N={big_n}")
    powers = np.arange(big_n + 1, dtype=float) ** (2.0 - alpha)
    return np.diff(powers)


@SchemeRegistry.register("l1")
class L1Scheme(TimeStepper):
    """L1 comparison scheme; the same formula is used from n = 0 on"""

    def __init__(self, config: L1Config, **overrides):
        super().__init__(config, **overrides)
        self.weights = l1_weights(config.alpha, config.big_n)
        self.mu = config.tau ** (config.alpha - 1.0) * gamma(3.0 - config.alpha)
        self.central = config.nonlinearity_mode is NonlinearityMode.CENTRAL

    def get_default_params(self) -> Dict[str, Any]:
        return {
            'verify': True,
        }

    def _history(self, state: SchemeState) -> np.ndarray:
        """sum_{k=1}^n (a_{n-k} - a_{n-k+1}) delta_t u^{k-1/2} + a_n psi"""
        n, a = state.n, self.weights
        memory = a[n] * state.psi.values
        if n > 0:
            slopes = np.diff(state.levels[:n + 1], axis=0) / self.tau
            ks = np.arange(1, n + 1)
            memory = memory + (a[n - ks] - a[n - ks + 1]) @ slopes
        return memory

    def _base(self, state: SchemeState) -> Tuple[np.ndarray, float, float]:
        """Right-hand side without the nonlinear term, and the matrix bands"""
        n, tau, h = state.n, self.tau, self.grid.h
        u_now = state.levels[n]
        time_diag = self.weights[0] / (self.mu * tau)

        base = (time_diag * u_now + self._history(state) / self.mu
                + 0.5 * delta_x2(GridFunction(self.grid, u_now)).values
                + self.problem.source(self.grid.nodes, (n + 0.5) * tau))
        return base, -0.5 / h ** 2, time_diag + 1.0 / h ** 2

    def assemble(self, state: SchemeState, guess: np.ndarray = None) -> TridiagonalSystem:
        """System for u^{n+1} with f frozen at the guess (central) or at u^n (lagged)"""
        base, off, diag = self._base(state)
        u_now = state.levels[state.n]
        if self.central:
            guess = u_now if guess is None else guess
            nonlinear = 0.5 * (self.problem.f(guess) + self.problem.f(u_now))
        else:
            nonlinear = self.problem.f(u_now)
        return TridiagonalSystem.constant(off, diag, off, (base - nonlinear)[1:-1])

    def advance(self, state: SchemeState) -> Tuple[np.ndarray, StepReport]:
        if not self.central:
            return super().advance(state)

        begin = time.perf_counter()
        base, off, diag = self._base(state)
        u_now = state.levels[state.n]
        f_now = self.problem.f(u_now)
        assembly_time = time.perf_counter() - begin

        fp_tol, fp_max_iter = self.config.fp_tol, self.config.fp_max_iter
        guess = u_now.copy()
        gap = np.inf
        solve_time = 0.0
        for sweep in range(1, fp_max_iter + 1):
            begin = time.perf_counter()
            rhs = (base - 0.5 * (self.problem.f(guess) + f_now))[1:-1]
            system = TridiagonalSystem.constant(off, diag, off, rhs)
            assembled = time.perf_counter()
            iterate = np.zeros_like(guess)
            iterate[1:-1] = solve(system)
            solved = time.perf_counter()
            assembly_time += assembled - begin
            solve_time += solved - assembled

            gap = float(np.max(np.abs(iterate - guess)))
            guess = iterate
            if gap <= fp_tol:
                logger.debug(f"Step {state.n}: fixed point after {sweep} sweeps, gap {gap:.2e}")
                report = StepReport(n=state.n, residual_inf=0.0, assembly_time=assembly_time,
                                    solve_time=solve_time, iterations=sweep, fixed_point_gap=gap)
                return guess, report

        raise FixedPointError(state.n, fp_max_iter, gap)

    def residual_limit(self, state: SchemeState) -> float:
        # sweeps stop at fp_tol, so allow one more decade
        return 10.0 * super().residual_limit(state)

    def residual(self, state: SchemeState) -> float:
        return l1_residual(self.weights, self.mu, self.tau, self.grid, self.problem,
                           state.levels, state.psi.values, state.n - 1, self.central)
