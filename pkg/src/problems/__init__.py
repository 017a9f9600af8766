# Problem definitions
from .base import ProblemSpec, zero_problem
from .manufactured import manufactured_case, linear_case, NONLINEARITIES, CASE_IDS
from .caputo import caputo_derivative, equation_residual

__all__ = [
    'ProblemSpec',
    'zero_problem',
    'manufactured_case',
    'linear_case',
    'NONLINEARITIES',
    'CASE_IDS',
    'caputo_derivative',
    'equation_residual',
]
