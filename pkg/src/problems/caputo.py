#!/usr/bin/env python3
"""
Caputo Quadrature - Independent evaluation of the Caputo derivative

Used only to check that a problem's source, initial data and exact solution
fit together; the schemes never call it.
"""

from typing import Callable

import numpy as np
from scipy import integrate

from discretization.coeffs import gamma
from .base import ProblemSpec


def caputo_derivative(g_tt: Callable[[float], float], t: float, alpha: float,
                      tol: float = 1e-10) -> float:
    """
    (1/Gamma(2-alpha)) * int_0^t g''(s) (t-s)^(1-alpha) ds

    The endpoint singularity is absorbed by QUADPACK's algebraic weight
    (x-0)^0 (t-x)^(1-alpha), a Gauss-Jacobi type rule.

    Args:
        g_tt: Second derivative of g
        t: Evaluation time >= 0
        alpha: Order in (1, 2)
        tol: Relative tolerance handed to quad
    """
    if not 1.0 < alpha < 2.0:
        raise ValueError(f"alpha must lie in (1, 2), got {alpha}")
    if t < 0:
        raise ValueError(f"t must be non-negative, got {t}")
    if t == 0:
        return 0.0
    value, _ = integrate.quad(g_tt, 0.0, t, weight='alg', wvar=(0.0, 1.0 - alpha),
                              epsabs=1e-13, epsrel=tol)
    return value / gamma(2.0 - alpha)


def equation_residual(spec: ProblemSpec, x: float, t: float) -> float:
    """
    D_t^alpha u - u_xx + f(u) - p at (x, t) for the attached exact solution

    Returns:
        Signed residual; zero when the problem data are consistent
    """
    if spec.alpha is None or spec.exact is None or spec.exact_tt is None or spec.exact_xx is None:
        raise ValueError(f"problem '{spec.name}' lacks alpha or exact derivatives for a residual check")
    caputo = caputo_derivative(lambda s: float(spec.exact_tt(x, s)), t, spec.alpha)
    u = spec.exact(np.asarray(x, dtype=float), t)
    return float(caputo - spec.exact_xx(x, t) + spec.f(u) - spec.source(x, t))
