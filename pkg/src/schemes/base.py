#!/usr/bin/env python3
"""
Base Stepper Class - Abstract base for all time-stepping schemes

A stepper owns one run: it builds the first level, then repeatedly assembles
and solves the implicit system for the next level, checking every accepted
level against an independent evaluation of the discrete equation.
"""

import logging
import time
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from discretization.coeffs import FractionalParams
from discretization.mesh import GridFunction, SpaceGrid, norm_l2, sample
from discretization.trisolve import TridiagonalSystem, solve
from problems.base import ProblemSpec

logger = logging.getLogger(__name__)

# Accepted levels must satisfy the discrete equation to this scale times max(1, max_t |p|_inf)
RESIDUAL_TOLERANCE = 1e-10


class Variant(Enum):
    STANDARD = 'std'
    COMPACT = 'compact'


@dataclass(frozen=True)
class SchemeConfig:
    """Everything that fixes one linearized-scheme run"""
    params: FractionalParams
    grid: SpaceGrid
    problem: ProblemSpec
    variant: Variant = Variant.STANDARD

    def __post_init__(self):
        validate_setup(self.params, self.grid, self.problem)


def validate_setup(params: FractionalParams, grid: SpaceGrid, problem: ProblemSpec):
    """Shared consistency checks between step sizes, grid and problem"""
    horizon = params.tau * params.big_n
    if abs(horizon - problem.final_time) > 1e-12 * max(1.0, problem.final_time):
        raise ValueError(f"tau*N = {horizon} does not match T = {problem.final_time}")
    if abs(grid.a - problem.a) > 1e-14 or abs(grid.b - problem.b) > 1e-14:
        raise ValueError(f"grid [{grid.a}, {grid.b}] does not cover problem domain [{problem.a}, {problem.b}]")
    if problem.alpha is not None and abs(problem.alpha - params.alpha) > 1e-15:
        raise ValueError(f"problem built for alpha={problem.alpha}, run uses alpha={params.alpha}")


class SchemeState:
    """Solution levels u^0..u^n plus the initial velocity"""

    def __init__(self, grid: SpaceGrid, big_n: int, phi: GridFunction, psi: GridFunction):
        if not phi.is_dirichlet() or not psi.is_dirichlet():
            raise ValueError("initial data must vanish on the boundary")
        self.grid = grid
        self.psi = psi
        self.levels = np.zeros((big_n + 1, grid.big_m + 1))
        self.levels[0] = phi.values
        self.n = 0

    @property
    def history(self) -> List[GridFunction]:
        return [GridFunction(self.grid, row) for row in self.levels[:self.n + 1]]

    @property
    def current(self) -> np.ndarray:
        return self.levels[self.n]

    def push(self, values: np.ndarray):
        if self.n + 1 >= len(self.levels):
            raise RuntimeError(f"state already holds all {len(self.levels)} levels")
        self.n += 1
        self.levels[self.n] = values
        self.levels[self.n, 0] = self.levels[self.n, -1] = 0.0


@dataclass
class StepReport:
    """Per-step diagnostics"""
    n: int
    residual_inf: float
    assembly_time: float
    solve_time: float
    iterations: int = 1
    fixed_point_gap: float = 0.0
    residual_limit: float = np.inf

    @property
    def within_tolerance(self) -> bool:
        return self.residual_inf <= self.residual_limit


@dataclass
class RunResult:
    """Outcome of a full time integration"""
    levels: np.ndarray
    e2: Optional[float]
    reports: List[StepReport] = field(default_factory=list)
    wall_time: float = 0.0

    @property
    def max_residual(self) -> float:
        return max((r.residual_inf for r in self.reports), default=0.0)

    @property
    def breaches(self) -> List[StepReport]:
        """Steps whose residual exceeded the acceptance limit"""
        return [r for r in self.reports if not r.within_tolerance]

    @property
    def total_iterations(self) -> int:
        return sum(r.iterations for r in self.reports)

    def __iter__(self):
        # history, E2, reports
        return iter((self.levels, self.e2, self.reports))


class TimeStepper(ABC):
    """Abstract base class for all time-stepping schemes"""

    def __init__(self, config, **overrides):
        self.config = config
        self.params = self.get_default_params()
        for name, value in overrides.items():
            self.set_param(name, value)

    @property
    def grid(self) -> SpaceGrid:
        return self.config.grid

    @property
    def problem(self) -> ProblemSpec:
        return self.config.problem

    @property
    def tau(self) -> float:
        return self.config.params.tau

    @property
    def big_n(self) -> int:
        return self.config.params.big_n

    @abstractmethod
    def get_default_params(self) -> Dict[str, Any]:
        """Return default tuning parameters for this scheme"""
        pass

    @abstractmethod
    def assemble(self, state: SchemeState) -> TridiagonalSystem:
        """Implicit system for u^{n+1} on the interior nodes"""
        pass

    @abstractmethod
    def residual(self, state: SchemeState) -> float:
        """Interior max-norm residual of the newest level in the displayed equation"""
        pass

    def set_param(self, name: str, value: Any):
        """Set a scheme parameter"""
        if name in self.params:
            self.params[name] = value
        else:
            raise ValueError(f"Unknown parameter '{name}' for scheme. Valid parameters: {list(self.params.keys())}")

    def initial_state(self) -> SchemeState:
        phi = sample(self.grid, self.problem.phi, dirichlet=True)
        psi = sample(self.grid, self.problem.psi, dirichlet=True)
        return SchemeState(self.grid, self.big_n, phi, psi)

    def source(self, t: float) -> np.ndarray:
        return sample(self.grid, lambda x: self.problem.source(x, t)).values

    def start(self, state: SchemeState) -> Tuple[np.ndarray, StepReport]:
        """u^1 from u^0 and psi; schemes without a special start reuse the generic step"""
        return self.advance(state)

    def first_step(self, state: SchemeState) -> GridFunction:
        if state.n != 0:
            raise ValueError(f"first step needs a state at n=0, got n={state.n}")
        values, _ = self.start(state)
        return GridFunction(self.grid, values)

    def advance(self, state: SchemeState) -> Tuple[np.ndarray, StepReport]:
        """Solve for u^{n+1} without touching the state"""
        start = time.perf_counter()
        system = self.assemble(state)
        assembled = time.perf_counter()
        interior = solve(system)
        solved = time.perf_counter()

        values = np.zeros(self.grid.big_m + 1)
        values[1:-1] = interior
        report = StepReport(n=state.n, residual_inf=0.0,
                            assembly_time=assembled - start, solve_time=solved - assembled)
        return values, report

    @cached_property
    def source_scale(self) -> float:
        """max |p|_inf over t = 0, tau/2, tau, ..., T"""
        times = np.linspace(0.0, self.big_n * self.tau, 2 * self.big_n + 1)
        return max(float(np.max(np.abs(self.source(t)))) for t in times)

    def residual_limit(self, state: SchemeState) -> float:
        """Acceptance bound for the residual of the newest level"""
        return RESIDUAL_TOLERANCE * max(1.0, self.source_scale)

    def step(self, state: SchemeState) -> Tuple[GridFunction, StepReport]:
        """Advance one level, append it to the history and check it"""
        values, report = self.start(state) if state.n == 0 else self.advance(state)
        state.push(values)
        if self.params.get('verify', True):
            report.residual_inf = self.residual(state)
            report.residual_limit = self.residual_limit(state)
            if not report.within_tolerance:
                logger.debug(f"Step {report.n}: residual {report.residual_inf:.3e} above {report.residual_limit:.3e}")
        return GridFunction(self.grid, state.current.copy()), report

    def run(self) -> RunResult:
        """Integrate from t=0 to T and measure the max-in-time L2 error"""
        state = self.initial_state()
        reports = []

        start = time.perf_counter()
        while state.n < self.big_n:
            _, report = self.step(state)
            reports.append(report)
        wall_time = time.perf_counter() - start

        e2 = self.max_error(state.levels) if self.problem.has_exact else None
        result = RunResult(levels=state.levels, e2=e2, reports=reports, wall_time=wall_time)
        logger.debug(f"{type(self).__name__}: N={self.big_n}, M={self.grid.big_m}, "
                     f"E2={e2}, max residual={result.max_residual:.3e}, {wall_time:.3f}s")
        return result

    def max_error(self, levels: np.ndarray) -> float:
        """max_n || u^n - u(., t_n) ||"""
        nodes = self.grid.nodes
        worst = 0.0
        for n, row in enumerate(levels):
            exact = self.problem.exact(nodes, n * self.tau)
            worst = max(worst, norm_l2(GridFunction(self.grid, row - exact)))
        return worst
