#!/usr/bin/env python3
"""
Manufactured Problems - u(x,t) = sin(pi x)(t^4 + 1) on [0,1] x [0,1]

The source is back-computed so that u solves the equation exactly:
p = [24/Gamma(5-alpha) t^(4-alpha) + pi^2 (t^4 + 1)] sin(pi x) + f(u).
"""

from typing import Callable

import numpy as np

from discretization.coeffs import gamma
from .base import ProblemSpec

# Case id -> (label, nonlinearity)
NONLINEARITIES = {
    1: ('cubic', lambda u: 2.0 * u ** 3),
    2: ('sine-gordon', np.sin),
    3: ('square-root', lambda u: np.sqrt(u ** 2 + 5.0)),
}

CASE_IDS = tuple(NONLINEARITIES)

PI = np.pi


def _zeros(x):
    return np.zeros_like(np.asarray(x, dtype=float))


def _manufactured(name: str, f: Callable, alpha: float) -> ProblemSpec:
    if not 1.0 < alpha < 2.0:
        raise ValueError(f"alpha must lie in (1, 2), got {alpha}")
    caputo_scale = 24.0 / gamma(5.0 - alpha)

    def exact(x, t):
        return np.sin(PI * x) * (t ** 4 + 1.0)

    def exact_t(x, t):
        return 4.0 * t ** 3 * np.sin(PI * x)

    def exact_tt(x, t):
        return 12.0 * t ** 2 * np.sin(PI * x)

    def exact_xx(x, t):
        return -PI ** 2 * (t ** 4 + 1.0) * np.sin(PI * x)

    def source(x, t):
        return (caputo_scale * t ** (4.0 - alpha) + PI ** 2 * (t ** 4 + 1.0)) * np.sin(PI * x) + f(exact(x, t))

    return ProblemSpec(
        name=name,
        a=0.0,
        b=1.0,
        final_time=1.0,
        alpha=alpha,
        f=f,
        source=source,
        phi=lambda x: np.sin(PI * x),
        psi=_zeros,
        phi_xx=lambda x: -PI ** 2 * np.sin(PI * x),
        psi_xx=_zeros,
        exact=exact,
        exact_t=exact_t,
        exact_tt=exact_tt,
        exact_xx=exact_xx,
    )


def manufactured_case(which: int, alpha: float) -> ProblemSpec:
    """
    Build one of the three verification problems

    Args:
        which: Case id 1, 2 or 3 (cubic, sine-Gordon, square-root nonlinearity)
        alpha: Caputo order in (1, 2)

    Returns:
        ProblemSpec with the exact solution and its derivatives attached
    """
    if which not in NONLINEARITIES:
        raise ValueError(f"unknown case {which!r}, expected one of {list(CASE_IDS)}")
    label, f = NONLINEARITIES[which]
    return _manufactured(f'case{which}-{label}', f, alpha)


def linear_case(alpha: float) -> ProblemSpec:
    """Same exact solution with f = 0"""
    return _manufactured('linear', _zeros, alpha)
