#!/usr/bin/env python3
"""
Convergence Reports - Rows, observed rates and their CSV / markdown forms
"""

import csv
import logging
import math
import subprocess
from dataclasses import dataclass, field
from datetime import datetime, timezone
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

logger = logging.getLogger(__name__)

__version__ = '1.0.0'

CSV_HEADER = ('alpha', 'case', 'variant', 'tau', 'h', 'E2', 'rate', 'wall_time_s')
RATE_PLACEHOLDER = '∗'


@dataclass
class ConvergenceRow:
    """One solver run of a study"""
    alpha: float
    case: str
    variant: str
    tau: float
    h: float
    e2: Optional[float]
    wall_time: float
    max_residual: float = 0.0
    iterations: int = 0
    breaches: int = 0

    @property
    def group(self):
        return (self.alpha, self.case, self.variant)


def convergence_rate(coarse: Optional[float], fine: Optional[float]) -> Optional[float]:
    """log2(E(2s)/E(s)); None unless both errors are positive and finite"""
    if coarse is None or fine is None:
        return None
    if not (math.isfinite(coarse) and math.isfinite(fine)) or coarse <= 0 or fine <= 0:
        return None
    return math.log2(coarse / fine)


@dataclass
class ConvergenceReport:
    """Rows in ladder order plus provenance"""
    direction: str
    rows: List[ConvergenceRow] = field(default_factory=list)
    metadata: Dict[str, Any] = field(default_factory=dict)
    recorded_rates: Optional[List[Optional[float]]] = None

    def append(self, row: ConvergenceRow):
        self.rows.append(row)

    def rates(self) -> List[Optional[float]]:
        """Rate of each row against the previous row of the same (alpha, case, variant)"""
        rates = []
        previous = None
        for row in self.rows:
            if previous is not None and previous.group == row.group:
                rates.append(convergence_rate(previous.e2, row.e2))
            else:
                rates.append(None)
            previous = row
        return rates

    @property
    def e2_column(self) -> List[Optional[float]]:
        return [row.e2 for row in self.rows]

    @property
    def total_wall_time(self) -> float:
        return sum(row.wall_time for row in self.rows)

    def __len__(self):
        return len(self.rows)


def git_stamp() -> Optional[str]:
    """Short commit hash of the working tree, or None outside a git checkout"""
    try:
        result = subprocess.run(
            ["git", "rev-parse", "--short", "HEAD"],
            stdout=subprocess.PIPE,
            stderr=subprocess.DEVNULL,
            check=False,
            text=True,
            cwd=Path(__file__).resolve().parent,
        )
    except OSError:
        return None
    stamp = result.stdout.strip()
    return stamp if result.returncode == 0 and stamp else None


def build_metadata(**fields) -> Dict[str, Any]:
    """Provenance block attached to every report"""
    metadata = {
        'version': __version__,
        'git': git_stamp(),
        'created': datetime.now(timezone.utc).isoformat(timespec='seconds'),
    }
    metadata.update(fields)
    return metadata


def format_sci(value: Optional[float]) -> str:
    """4 significant digits, e.g. 2.5994e-03"""
    if value is None:
        return '-'
    return f"{value:.4e}"


def format_rate(rate: Optional[float]) -> str:
    return RATE_PLACEHOLDER if rate is None else f"{rate:.4f}"


def format_step(step: float) -> str:
    """1/20 style when the step is a unit fraction, decimal otherwise"""
    exact = Fraction(step).limit_denominator(10 ** 7)
    if exact.numerator == 1 and abs(float(exact) - step) <= 1e-15 * step:
        return f"1/{exact.denominator}"
    return f"{step:.6g}"


def write_csv(report: ConvergenceReport, path: Union[str, Path]) -> Path:
    """Full double precision; empty cells for undefined rates"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w', newline='') as f:
        writer = csv.writer(f)
        writer.writerow(CSV_HEADER)
        for row, rate in zip(report.rows, report.rates()):
            writer.writerow([
                repr(row.alpha),
                row.case,
                row.variant,
                repr(row.tau),
                repr(row.h),
                '' if row.e2 is None else repr(row.e2),
                '' if rate is None else repr(rate),
                repr(row.wall_time),
            ])
    return path


def render_markdown(report: ConvergenceReport) -> str:
    """Tables grouped by (alpha, case, variant), one row per ladder entry"""
    rate_label = 'Rate1' if report.direction == 'time' else 'Rate2'
    lines = []
    title = report.metadata.get('title')
    if title:
        lines.append(f"# {title}")
        lines.append('')
    stamp = ', '.join(f"{k}={v}" for k, v in report.metadata.items() if k != 'title' and v is not None)
    if stamp:
        lines.append(f"_{stamp}_")
        lines.append('')

    current = None
    for row, rate in zip(report.rows, report.rates()):
        if row.group != current:
            if current is not None:
                lines.append('')
            current = row.group
            lines.append(f"**alpha = {row.alpha}, case {row.case}, {row.variant}**")
            lines.append('')
            lines.append(f"| tau | h | E2 | {rate_label} | wall time (s) |")
            lines.append('|---|---|---|---|---|')
        lines.append(f"| {format_step(row.tau)} | {format_step(row.h)} | {format_sci(row.e2)} "
                     f"| {format_rate(rate)} | {row.wall_time:.3f} |")
    return '\n'.join(lines) + '\n'


def write_markdown(report: ConvergenceReport, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w') as f:
        f.write(render_markdown(report))
    return path


def emit(report: ConvergenceReport, fmt: str, path: Union[str, Path]) -> Path:
    """
    Write a complete or partial report

    Args:
        report: Rows to serialize
        fmt: 'csv' or 'md'
        path: Destination file, parent directories are created

    Returns:
        The written path
    """
    writers = {'csv': write_csv, 'md': write_markdown}
    if fmt not in writers:
        raise ValueError(f"Unknown format '{fmt}'. Valid formats: {list(writers)}")
    written = writers[fmt](report, path)
    logger.info(f"Wrote {len(report)} rows to {written}")
    return written


def _optional_float(cell: str) -> Optional[float]:
    cell = cell.strip()
    return float(cell) if cell else None


def load_report(path: Union[str, Path], direction: str = 'time') -> ConvergenceReport:
    """Read an emitted CSV back; rates from the file are kept in recorded_rates"""
    path = Path(path)
    report = ConvergenceReport(direction=direction, metadata={'source': str(path)}, recorded_rates=[])
    with open(path, 'r', newline='') as f:
        reader = csv.DictReader(f)
        if tuple(reader.fieldnames or ()) != CSV_HEADER:
            raise ValueError(f"{path}: expected header {','.join(CSV_HEADER)}, got {reader.fieldnames}")
        for record in reader:
            report.append(ConvergenceRow(
                alpha=float(record['alpha']),
                case=record['case'],
                variant=record['variant'],
                tau=float(record['tau']),
                h=float(record['h']),
                e2=_optional_float(record['E2']),
                wall_time=float(record['wall_time_s']),
            ))
            report.recorded_rates.append(_optional_float(record['rate']))
    return report
