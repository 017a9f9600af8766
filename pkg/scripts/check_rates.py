#!/usr/bin/env python3
"""
Recompute convergence rates from emitted CSV reports and compare them
with the rate column
"""

import math
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / 'src'))

from harness.report import RATE_PLACEHOLDER, load_report

TOLERANCE = 1e-9


def check(path: Path) -> int:
    """Number of rows whose recorded rate disagrees with the recomputed one"""
    report = load_report(path)
    mismatches = 0
    print(f'=== {path} ({len(report)} rows) ===')
    for row, recorded, recomputed in zip(report.rows, report.recorded_rates, report.rates()):
        if recorded is None and recomputed is None:
            status = 'ok'
        elif recorded is None or recomputed is None:
            status = 'MISMATCH'
        elif math.isclose(recorded, recomputed, rel_tol=TOLERANCE, abs_tol=TOLERANCE):
            status = 'ok'
        else:
            status = 'MISMATCH'
        if status != 'ok':
            mismatches += 1
        shown = RATE_PLACEHOLDER if recomputed is None else f'{recomputed:.4f}'
        print(f'  alpha={row.alpha} case={row.case} {row.variant:12} tau={row.tau:.6g} h={row.h:.6g} '
              f'rate={shown:>8}  {status}')
    return mismatches


def main():
    if len(sys.argv) < 2:
        print('Usage: check_rates.py REPORT.csv [REPORT.csv ...]')
        sys.exit(2)

    total = 0
    for name in sys.argv[1:]:
        path = Path(name)
        if not path.exists():
            print(f'No such report: {path}')
            sys.exit(1)
        try:
            total += check(path)
        except (ValueError, KeyError) as e:
            print(f'Error reading {path}: {e}')
            sys.exit(1)

    if total:
        print(f'\n{total} rate(s) disagree with the E2 column')
        sys.exit(1)
    print('\nAll rates match the E2 column')


if __name__ == '__main__':
    main()
