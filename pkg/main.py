#!/usr/bin/env python3
"""
Fractional Klein-Gordon Solver - Command line entry point
Run with: python3 main.py time-study --preset table1
"""

import argparse
import csv
import logging
import sys
from pathlib import Path

# Add src to path
sys.path.insert(0, str(Path(__file__).parent / 'src'))

# Setup logging first
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger(__name__)

from discretization import FractionalParams, SingularSystemError, build_table
from harness import (
    Comparison,
    ComparisonError,
    ComparisonPlan,
    Direction,
    RunJob,
    StudyError,
    StudyPlan,
    emit,
    load_config,
    load_preset,
    list_presets,
    merge_settings,
    parse_step,
    render_markdown,
    run_comparison,
    run_job,
    run_space_study,
    run_stability_probe,
    run_time_study,
    step_count,
)
from harness.plan import DEFAULT_PRESET_FILE, DEFAULT_STUDY_FILE, parse_case, problem_for
from harness.report import ConvergenceReport, build_metadata, format_rate, format_sci
from schemes import FixedPointError, NonlinearityMode, SchemeRegistry, Variant

EXIT_OK = 0
EXIT_FAILURE = 1


class StudyCLI:
    """Resolves settings for one subcommand and runs it"""

    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.settings = self.resolve_settings()

    def resolve_settings(self) -> dict:
        """defaults < study file < preset < command line"""
        args = self.args
        file_layer = {}
        if not args.no_config:
            path = Path(args.config or DEFAULT_STUDY_FILE)
            if path.exists():
                file_layer = load_config(path)
            elif args.config:
                raise ValueError(f"config file {path} not found")

        preset_layer = {}
        if args.preset:
            preset_layer = load_preset(args.preset, args.presets_file)
            expected = preset_layer.pop('command', None)
            preset_layer.pop('description', None)
            if expected and expected != args.command:
                logger.warning(f"Preset '{args.preset}' is meant for '{expected}', running '{args.command}'")
        file_layer.pop('command', None)
        file_layer.pop('description', None)

        cli_layer = {
            'case': args.case,
            'alpha': args.alpha,
            'variant': args.variant,
            'h': args.h,
            'tau': args.tau,
            'ladder': args.ladder,
            'format': args.format,
            'out': args.out,
            'workers': args.workers,
            'mode': args.mode,
            'fp_tol': args.fp_tol,
            'fp_max_iter': args.fp_max_iter,
            'verify': args.verify,
            'scheme': args.scheme,
            'n': args.n,
            'eps': args.eps,
        }
        return merge_settings(file_layer, preset_layer, cli_layer)

    def output(self, report: ConvergenceReport):
        """Emit to --out, or print markdown"""
        out = self.settings.get('out')
        if out:
            emit(report, self.settings['format'], out)
        else:
            print(render_markdown(report))

    def single(self, key: str):
        values = self.settings[key]
        if isinstance(values, (list, tuple)):
            if len(values) != 1:
                raise ValueError(f"'{key}' takes a single value here, got {values}")
            return values[0]
        return values

    def cmd_solve(self) -> int:
        s = self.settings
        job = RunJob(
            engine=s['scheme'],
            case=parse_case(self.single('case')),
            alpha=float(self.single('alpha')),
            tau=parse_step(s['tau']),
            h=parse_step(s['h']),
            variant=Variant(s['variant']),
            mode=NonlinearityMode(s['mode']),
            fp_tol=float(s['fp_tol']),
            fp_max_iter=int(s['fp_max_iter']),
            verify=bool(s['verify']),
        )
        row, result = run_job(job)
        print(f"scheme:        {s['scheme']} ({job.label})")
        print(f"E2:            {format_sci(row.e2)}")
        print(f"steps:         {len(result.reports)}")
        print(f"max residual:  {row.max_residual:.3e}")
        print(f"wall time:     {row.wall_time:.3f}s")
        if s.get('out'):
            report = ConvergenceReport('time', metadata=build_metadata(title=f"single run, {job.label}"))
            report.append(row)
            emit(report, s['format'], s['out'])
        return EXIT_OK

    def _study(self, direction: Direction) -> int:
        plan = StudyPlan.from_settings(self.settings, direction)
        runner = run_time_study if direction is Direction.TIME else run_space_study
        try:
            report = runner(plan)
        except StudyError as e:
            self.output(e.report)
            return EXIT_FAILURE
        self.output(report)
        return EXIT_OK

    def cmd_time_study(self) -> int:
        return self._study(Direction.TIME)

    def cmd_space_study(self) -> int:
        return self._study(Direction.SPACE)

    def emit_comparison(self, comparison: Comparison, plan: ComparisonPlan):
        """--out X.csv becomes X-linearized.csv and X-<mode>.csv; markdown to stdout otherwise"""
        out = self.settings.get('out')
        if out:
            out = Path(out)
            emit(comparison.linearized, plan.fmt, out.with_name(f"{out.stem}-linearized{out.suffix}"))
            emit(comparison.reference, plan.fmt, out.with_name(f"{out.stem}-{plan.mode.value}{out.suffix}"))
        else:
            print(render_markdown(comparison.linearized))
            print(render_markdown(comparison.reference))

    def cmd_compare_l1(self) -> int:
        plan = ComparisonPlan.from_settings(self.settings)
        try:
            comparison = run_comparison(plan)
        except ComparisonError as e:
            self.emit_comparison(e.comparison, plan)
            return EXIT_FAILURE

        self.emit_comparison(comparison, plan)
        for line in comparison.summary():
            print(line)
        return EXIT_OK

    def cmd_coeff_dump(self) -> int:
        alpha = float(self.single('alpha'))
        tau = parse_step(self.settings['tau'])
        big_n = step_count(1.0, tau, 'tau')
        n = int(self.settings['n'])
        if not 0 <= n < big_n:
            raise ValueError(f"row n must lie in [0, {big_n - 1}] for tau={tau}, got {n}")
        table = build_table(FractionalParams(alpha=alpha, tau=float(tau), big_n=big_n))
        rows = table.dump_rows(n)

        if self.settings['format'] == 'md':
            print(f"alpha={alpha}, tau={tau}, mu={table.mu:.10e}, n={n}")
            print()
            print("| k | c_k | d_k |")
            print("|---|---|---|")
            for k, c, d in rows:
                print(f"| {k} | {c:.10e} | {d:.10e} |")
        else:
            writer = csv.writer(sys.stdout)
            writer.writerow(('k', 'c', 'd'))
            for k, c, d in rows:
                writer.writerow((k, repr(c), repr(d)))
        return EXIT_OK

    def cmd_stability(self) -> int:
        case = parse_case(self.single('case'))
        alpha = float(self.single('alpha'))
        problem = problem_for(case, alpha)
        big_m = step_count(problem.b - problem.a, parse_step(self.settings['h']), 'h')
        big_n = step_count(problem.final_time, parse_step(self.settings['tau']), 'tau')
        epsilons = [float(e) for e in self.settings['eps']]

        probe = run_stability_probe(case, alpha, big_m, big_n, epsilons, Variant(self.settings['variant']))
        print("| epsilon | max_n |eta^n| | ratio |")
        print("|---|---|---|")
        ratios = [None] + probe.ratios()
        for epsilon, response, ratio in zip(probe.epsilons, probe.responses, ratios):
            print(f"| {epsilon:g} | {format_sci(response)} | {format_rate(ratio)} |")
        return EXIT_OK

    def run(self) -> int:
        handler = {
            'solve': self.cmd_solve,
            'time-study': self.cmd_time_study,
            'space-study': self.cmd_space_study,
            'compare-l1': self.cmd_compare_l1,
            'coeff-dump': self.cmd_coeff_dump,
            'stability': self.cmd_stability,
        }[self.args.command]
        try:
            return handler()
        except (SingularSystemError, FixedPointError) as e:
            logger.error(f"Run failed: {e}")
            return EXIT_FAILURE


def build_parser() -> argparse.ArgumentParser:
    """Subcommands share one set of study flags"""
    available_schemes = SchemeRegistry.list_schemes()

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--case', nargs='+', default=None,
                        help='Case id(s): 1 cubic, 2 sine-Gordon, 3 square-root, linear (f = 0) or zero')
    common.add_argument('--alpha', nargs='+', type=float, default=None, help='Caputo order(s) in (1, 2)')
    common.add_argument('--variant', choices=[v.value for v in Variant], default=None,
                        help='Second-order standard or fourth-order compact in space')
    common.add_argument('--h', default=None, help='Space step, e.g. 1/1000 (ladder start in space-study)')
    common.add_argument('--tau', default=None, help='Time step, e.g. 1/20 (ladder start in time-study)')
    common.add_argument('--ladder', type=int, default=None, help='Number of halvings of the ladder start')
    common.add_argument('--format', choices=['csv', 'md'], default=None, help='Report format')
    common.add_argument('--out', default=None, help='Report path (printed as markdown when omitted)')
    common.add_argument('--workers', type=int, default=None, help='Worker processes for ladder studies')
    common.add_argument('--mode', choices=[m.value for m in NonlinearityMode], default=None,
                        help='L1 treatment of f: fixed-point central average or lagged')
    common.add_argument('--fp-tol', type=float, default=None, help='Fixed-point stopping tolerance (max norm)')
    common.add_argument('--fp-max-iter', type=int, default=None, help='Fixed-point sweep limit')
    common.add_argument('--no-verify', dest='verify', action='store_const', const=False, default=None,
                        help='Skip the per-step residual check')
    common.add_argument('--scheme', choices=available_schemes if available_schemes else None, default=None,
                        help='Scheme used by solve')
    common.add_argument('--n', type=int, default=None, help='Row index for coeff-dump (weights c^(n+1), d^(n+1))')
    common.add_argument('--eps', nargs='+', type=float, default=None, help='Perturbation sizes for stability')
    common.add_argument('--config', '-c', default=None, help=f'Study settings file (default {DEFAULT_STUDY_FILE})')
    common.add_argument('--no-config', action='store_true', help='Ignore the study settings file')
    common.add_argument('--preset', '-p', default=None, help='Named preset from the presets file')
    common.add_argument('--presets-file', default=DEFAULT_PRESET_FILE, help='Presets file')

    parser = argparse.ArgumentParser(description='Fractional Klein-Gordon solver and convergence studies')
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument('--verbose', '-v', action='store_true', help='Debug logging')
    verbosity.add_argument('--quiet', '-q', action='store_true', help='Warnings and errors only')
    parser.add_argument('--list-presets', action='store_true', help='List presets and exit')

    subparsers = parser.add_subparsers(dest='command')
    subparsers.add_parser('solve', parents=[common], help='One run, print E2 and timings')
    subparsers.add_parser('time-study', parents=[common], help='Refine tau at fixed h (Rate1)')
    subparsers.add_parser('space-study', parents=[common], help='Refine h at fixed tau (Rate2)')
    subparsers.add_parser('compare-l1', parents=[common], help='Linearized scheme against the L1 reference')
    subparsers.add_parser('coeff-dump', parents=[common], help='Print c and d weights of one row')
    subparsers.add_parser('stability', parents=[common], help='Response to perturbed initial data')
    return parser


def main(argv=None) -> int:
    """Entry point"""
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.verbose:
        logging.getLogger().setLevel(logging.DEBUG)
    elif args.quiet:
        logging.getLogger().setLevel(logging.WARNING)

    # Handle list presets request
    if args.list_presets:
        for name, description in list_presets(DEFAULT_PRESET_FILE).items():
            print(f"{name:10} {description}")
        return EXIT_OK

    if not args.command:
        parser.print_help()
        return EXIT_OK

    try:
        cli = StudyCLI(args)
    except (OSError, ValueError) as e:
        parser.error(str(e))

    try:
        return cli.run()
    except ValueError as e:
        parser.error(f"invalid study settings: {e}")


if __name__ == '__main__':
    sys.exit(main())
