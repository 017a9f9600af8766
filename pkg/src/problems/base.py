#!/usr/bin/env python3
"""
Problem Spec - Data of one time-fractional Klein-Gordon initial-boundary problem
"""

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

ScalarMap = Callable[[np.ndarray], np.ndarray]
FieldMap = Callable[[np.ndarray, float], np.ndarray]


@dataclass(frozen=True)
class ProblemSpec:
    """
    Nonlinearity, source and initial data on [a, b] x [0, T]

    All callables are vectorized over numpy arrays of x (or u).
    exact_t, exact_tt and exact_xx are only needed for consistency checks.
    """
    name: str
    a: float
    b: float
    final_time: float
    f: ScalarMap
    source: FieldMap
    phi: ScalarMap
    psi: ScalarMap
    phi_xx: ScalarMap
    psi_xx: ScalarMap
    alpha: Optional[float] = None
    exact: Optional[FieldMap] = None
    exact_t: Optional[FieldMap] = None
    exact_tt: Optional[FieldMap] = None
    exact_xx: Optional[FieldMap] = None

    def __post_init__(self):
        if not self.b > self.a:
            raise ValueError(f"problem '{self.name}' has an empty domain [{self.a}, {self.b}]")
        if not self.final_time > 0:
            raise ValueError(f"problem '{self.name}' needs T > 0, got {self.final_time}")

    @property
    def has_exact(self) -> bool:
        return self.exact is not None

    def initial_mismatch(self, x: np.ndarray) -> float:
        """max |phi - u(., 0)| and |psi - u_t(., 0)| over the sample points"""
        if self.exact is None:
            raise ValueError(f"problem '{self.name}' has no exact solution attached")
        gap = float(np.max(np.abs(self.phi(x) - self.exact(x, 0.0))))
        if self.exact_t is not None:
            gap = max(gap, float(np.max(np.abs(self.psi(x) - self.exact_t(x, 0.0)))))
        return gap


def _zeros(x: np.ndarray) -> np.ndarray:
    return np.zeros_like(np.asarray(x, dtype=float))


def zero_problem(a: float = 0.0, b: float = 1.0, final_time: float = 1.0) -> ProblemSpec:
    """Homogeneous problem whose solution is identically zero"""
    return ProblemSpec(
        name='zero',
        a=a,
        b=b,
        final_time=final_time,
        f=lambda u: u - u,
        source=lambda x, t: _zeros(x),
        phi=_zeros,
        psi=_zeros,
        phi_xx=_zeros,
        psi_xx=_zeros,
        exact=lambda x, t: _zeros(x),
        exact_t=lambda x, t: _zeros(x),
        exact_tt=lambda x, t: _zeros(x),
        exact_xx=lambda x, t: _zeros(x),
    )
