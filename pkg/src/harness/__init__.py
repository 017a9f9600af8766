# Study drivers and reports
from .plan import (
    DEFAULTS,
    ComparisonPlan,
    Direction,
    StudyPlan,
    load_config,
    load_preset,
    list_presets,
    make_ladder,
    merge_settings,
    parse_step,
    problem_for,
    step_count,
)
from .report import (
    CSV_HEADER,
    RATE_PLACEHOLDER,
    ConvergenceReport,
    ConvergenceRow,
    convergence_rate,
    emit,
    load_report,
    render_markdown,
)
from .study import (
    NOMINAL_ORDER,
    Comparison,
    ComparisonError,
    RunJob,
    StabilityProbe,
    StudyError,
    run_comparison,
    run_job,
    run_space_study,
    run_stability_probe,
    run_time_study,
    warn_off_nominal,
)

__all__ = [
    'DEFAULTS',
    'ComparisonPlan',
    'Direction',
    'StudyPlan',
    'load_config',
    'load_preset',
    'list_presets',
    'make_ladder',
    'merge_settings',
    'parse_step',
    'problem_for',
    'step_count',
    'CSV_HEADER',
    'RATE_PLACEHOLDER',
    'ConvergenceReport',
    'ConvergenceRow',
    'convergence_rate',
    'emit',
    'load_report',
    'render_markdown',
    'NOMINAL_ORDER',
    'Comparison',
    'ComparisonError',
    'RunJob',
    'StabilityProbe',
    'StudyError',
    'run_comparison',
    'run_job',
    'run_space_study',
    'run_stability_probe',
    'run_time_study',
    'warn_off_nominal',
]
