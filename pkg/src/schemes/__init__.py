# Time-stepping schemes
from .base import (
    RESIDUAL_TOLERANCE,
    RunResult,
    SchemeConfig,
    SchemeState,
    StepReport,
    TimeStepper,
    Variant,
)
from .registry import SchemeRegistry

# Import all scheme modules to trigger registration
from . import linearized
from . import l1

from .linearized import LinearizedScheme
from .l1 import FixedPointError, L1Config, L1Scheme, NonlinearityMode, l1_weights

__all__ = [
    'RESIDUAL_TOLERANCE',
    'RunResult',
    'SchemeConfig',
    'SchemeState',
    'StepReport',
    'TimeStepper',
    'Variant',
    'SchemeRegistry',
    'LinearizedScheme',
    'L1Scheme',
    'L1Config',
    'NonlinearityMode',
    'FixedPointError',
    'l1_weights',
]
