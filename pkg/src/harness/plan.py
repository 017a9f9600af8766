#!/usr/bin/env python3
"""
Study Plans - What to run, on which ladder, and where the settings come from

Settings are merged in order: built-in defaults, the YAML study file, a named
preset, then command-line flags. Step sizes stay exact as Fractions until a
run converts them into integer counts N = T/tau and M = (b-a)/h.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple, Union

import yaml

from problems import CASE_IDS, ProblemSpec, linear_case, manufactured_case, zero_problem
from schemes import NonlinearityMode, Variant

logger = logging.getLogger(__name__)

StepLike = Union[str, int, float, Fraction]
CaseId = Union[int, str]

ZERO_CASE = 'zero'
LINEAR_CASE = 'linear'
NAMED_CASES = (ZERO_CASE, LINEAR_CASE)

DEFAULT_STUDY_FILE = 'config/study.yaml'
DEFAULT_PRESET_FILE = 'config/tables.yaml'

# Built-in defaults, overridden by the study file, a preset and the CLI
DEFAULTS: Dict[str, Any] = {
    'case': [1],
    'alpha': [1.5],
    'variant': 'std',
    'h': '1/100',
    'tau': '1/20',
    'ladder': 3,
    'format': 'csv',
    'out': None,
    'workers': 1,
    'mode': 'central',
    'fp_tol': 1e-12,
    'fp_max_iter': 200,
    'verify': True,
    'scheme': 'linearized',
    'n': 0,
    'eps': [1e-3, 2e-3],
}

FORMATS = ('csv', 'md')


class Direction(Enum):
    TIME = 'time'
    SPACE = 'space'


def parse_step(value: StepLike) -> Fraction:
    """
    Exact step size from '1/1000', '0.05', 0.05 or a Fraction

    Floats go through their shortest repr so 0.05 becomes exactly 1/20.
    """
    if isinstance(value, bool):
        raise ValueError(f"step size must be a number, got {value!r}")
    try:
        step = value if isinstance(value, Fraction) else Fraction(str(value).strip())
    except (ValueError, ZeroDivisionError) as e:
        raise ValueError(f"cannot read step size {value!r}: {e}") from e
    if step <= 0:
        raise ValueError(f"step size must be positive, got {value!r}")
    return step


def step_count(length: float, step: Fraction, what: str = 'step') -> int:
    """Number of uniform steps of size `step` covering `length`, which must be integral"""
    count = Fraction(str(length)) / step
    if count.denominator != 1:
        raise ValueError(f"{what} {step} does not divide the interval length {length} (ratio {count})")
    return int(count)


def make_ladder(start: StepLike, halvings: int) -> Tuple[Fraction, ...]:
    """start, start/2, ..., start/2^halvings"""
    if int(halvings) != halvings or halvings < 0:
        raise ValueError(f"ladder needs a non-negative number of halvings, got {halvings}")
    first = parse_step(start)
    return tuple(first / 2 ** k for k in range(int(halvings) + 1))


def validate_ladder(ladder: Sequence[Fraction]):
    """Each entry must be exactly half the previous one"""
    if not ladder:
        raise ValueError("refinement ladder is empty")
    for coarse, fine in zip(ladder, ladder[1:]):
        if fine * 2 != coarse:
            raise ValueError(f"ladder must refine by a factor of 2, got {coarse} followed by {fine}")


def parse_case(value: CaseId) -> CaseId:
    if isinstance(value, str):
        if value.strip().lower() in NAMED_CASES:
            return value.strip().lower()
        value = value.strip()
        if not value.isdigit():
            raise ValueError(f"unknown case {value!r}, expected one of {list(CASE_IDS) + list(NAMED_CASES)}")
    case = int(value)
    if case not in CASE_IDS:
        raise ValueError(f"unknown case {value!r}, expected one of {list(CASE_IDS) + list(NAMED_CASES)}")
    return case


def problem_for(case: CaseId, alpha: float) -> ProblemSpec:
    """Problem instance for a case id at order alpha"""
    if case == ZERO_CASE:
        return zero_problem()
    if case == LINEAR_CASE:
        return linear_case(alpha)
    return manufactured_case(int(case), alpha)


def _as_list(value: Any) -> List[Any]:
    if value is None:
        return []
    if isinstance(value, (list, tuple)):
        return list(value)
    return [value]


@dataclass(frozen=True)
class StudyPlan:
    """One refinement study over every (case, alpha) pair"""
    cases: Tuple[CaseId, ...]
    alphas: Tuple[float, ...]
    variant: Variant
    direction: Direction
    fixed_step: Fraction
    ladder: Tuple[Fraction, ...]
    out: Optional[Path] = None
    fmt: str = 'csv'
    workers: int = 1
    verify: bool = True

    def __post_init__(self):
        if not self.cases:
            raise ValueError("study needs at least one case")
        if not self.alphas:
            raise ValueError("study needs at least one alpha")
        for alpha in self.alphas:
            if not 1.0 < alpha < 2.0:
                raise ValueError(f"alpha must lie in (1, 2), got {alpha}")
        if self.fmt not in FORMATS:
            raise ValueError(f"unknown format {self.fmt!r}, expected one of {list(FORMATS)}")
        if self.workers < 1:
            raise ValueError(f"workers must be >= 1, got {self.workers}")
        validate_ladder(self.ladder)

    def steps(self, entry: Fraction) -> Tuple[Fraction, Fraction]:
        """(tau, h) for one ladder entry"""
        if self.direction is Direction.TIME:
            return entry, self.fixed_step
        return self.fixed_step, entry

    def pairs(self) -> Iterable[Tuple[CaseId, float]]:
        for case in self.cases:
            for alpha in self.alphas:
                yield case, alpha

    @classmethod
    def from_settings(cls, settings: Dict[str, Any], direction: Direction) -> 'StudyPlan':
        """Build a plan from merged settings; the ladder runs over tau or h depending on direction"""
        ladder_key, fixed_key = ('tau', 'h') if direction is Direction.TIME else ('h', 'tau')
        out = settings.get('out')
        return cls(
            cases=tuple(parse_case(c) for c in _as_list(settings['case'])),
            alphas=tuple(float(a) for a in _as_list(settings['alpha'])),
            variant=Variant(settings['variant']),
            direction=direction,
            fixed_step=parse_step(settings[fixed_key]),
            ladder=make_ladder(settings[ladder_key], settings['ladder']),
            out=Path(out) if out else None,
            fmt=settings['format'],
            workers=int(settings['workers']),
            verify=bool(settings['verify']),
        )


@dataclass(frozen=True)
class ComparisonPlan:
    """Linearized scheme against the L1 reference on a shared tau ladder"""
    case: CaseId
    alpha: float
    h: Fraction
    ladder: Tuple[Fraction, ...]
    mode: NonlinearityMode = NonlinearityMode.CENTRAL
    fp_tol: float = 1e-12
    fp_max_iter: int = 200
    out: Optional[Path] = None
    fmt: str = 'csv'
    verify: bool = True

    def __post_init__(self):
        if not 1.0 < self.alpha < 2.0:
            raise ValueError(f"alpha must lie in (1, 2), got {self.alpha}")
        if self.fmt not in FORMATS:
            raise ValueError(f"unknown format {self.fmt!r}, expected one of {list(FORMATS)}")
        validate_ladder(self.ladder)

    @classmethod
    def from_settings(cls, settings: Dict[str, Any]) -> 'ComparisonPlan':
        cases = _as_list(settings['case'])
        alphas = _as_list(settings['alpha'])
        if len(cases) != 1 or len(alphas) != 1:
            raise ValueError(f"comparison runs one case at one alpha, got cases={cases}, alphas={alphas}")
        out = settings.get('out')
        return cls(
            case=parse_case(cases[0]),
            alpha=float(alphas[0]),
            h=parse_step(settings['h']),
            ladder=make_ladder(settings['tau'], settings['ladder']),
            mode=NonlinearityMode(settings['mode']),
            fp_tol=float(settings['fp_tol']),
            fp_max_iter=int(settings['fp_max_iter']),
            out=Path(out) if out else None,
            fmt=settings['format'],
            verify=bool(settings['verify']),
        )


def load_config(path: Union[str, Path]) -> Dict[str, Any]:
    """Read a YAML settings file; keys are the long CLI flags with underscores"""
    path = Path(path)
    with open(path, 'r') as f:
        data = yaml.safe_load(f) or {}
    if not isinstance(data, dict):
        raise ValueError(f"{path} must hold a mapping of settings, got {type(data).__name__}")
    unknown = sorted(set(data) - set(DEFAULTS) - {'command', 'description'})
    if unknown:
        raise ValueError(f"{path}: unknown settings {unknown}. Valid settings: {sorted(DEFAULTS)}")
    logger.info(f"Loaded settings from {path}")
    return data


def load_preset(name: str, path: Union[str, Path] = DEFAULT_PRESET_FILE) -> Dict[str, Any]:
    """One named entry of the presets file"""
    path = Path(path)
    with open(path, 'r') as f:
        presets = yaml.safe_load(f) or {}
    if name not in presets:
        raise ValueError(f"Unknown preset '{name}' in {path}. Valid presets: {sorted(presets)}")
    entry = dict(presets[name])
    unknown = sorted(set(entry) - set(DEFAULTS) - {'command', 'description'})
    if unknown:
        raise ValueError(f"preset '{name}': unknown settings {unknown}")
    logger.info(f"Loaded preset '{name}' from {path}")
    return entry


def list_presets(path: Union[str, Path] = DEFAULT_PRESET_FILE) -> Dict[str, str]:
    """Preset name -> description"""
    with open(path, 'r') as f:
        presets = yaml.safe_load(f) or {}
    return {name: entry.get('description', '') for name, entry in presets.items()}


def merge_settings(*layers: Optional[Dict[str, Any]]) -> Dict[str, Any]:
    """Later layers win; None values in a layer leave the earlier value in place"""
    merged = dict(DEFAULTS)
    for layer in layers:
        if not layer:
            continue
        for key, value in layer.items():
            if value is not None:
                merged[key] = value
    return merged
