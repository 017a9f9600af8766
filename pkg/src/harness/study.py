#!/usr/bin/env python3
"""
Study Drivers - Convergence ladders, the L1 comparison and the stability probe

A study is a list of independent RunJobs. Jobs carry only plain values so they
can be shipped to worker processes; each worker rebuilds its problem, grid and
stepper. Rows always come back in ladder order.
"""

import dataclasses
import logging
from dataclasses import dataclass
from fractions import Fraction
from multiprocessing import Pool
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from discretization.coeffs import FractionalParams
from discretization.mesh import GridFunction, SpaceGrid, norm_l2
from problems.base import ProblemSpec
from schemes import (
    L1Config,
    NonlinearityMode,
    RunResult,
    SchemeConfig,
    SchemeRegistry,
    Variant,
)
from .plan import CaseId, ComparisonPlan, Direction, StudyPlan, problem_for, step_count
from .report import ConvergenceReport, ConvergenceRow, build_metadata, format_step

logger = logging.getLogger(__name__)

LINEARIZED = 'linearized'
REFERENCE = 'l1'

# Observed order each study should show; rates further off than RATE_SLACK are logged
NOMINAL_ORDER = {
    (Direction.TIME, Variant.STANDARD): 2.0,
    (Direction.TIME, Variant.COMPACT): 2.0,
    (Direction.SPACE, Variant.STANDARD): 2.0,
    (Direction.SPACE, Variant.COMPACT): 4.0,
}
RATE_SLACK = 0.5


class StudyError(RuntimeError):
    """A ladder entry failed; `report` holds the rows completed before it"""

    def __init__(self, report: ConvergenceReport, cause: BaseException):
        super().__init__(f"study stopped after {len(report)} rows: {cause}")
        self.report = report
        self.cause = cause


class ComparisonError(StudyError):
    """A comparison row failed; `comparison` holds both partial reports"""

    def __init__(self, comparison: 'Comparison', failed: ConvergenceReport, cause: BaseException):
        super().__init__(failed, cause)
        self.comparison = comparison


@dataclass(frozen=True)
class RunJob:
    """One solver run described by plain values"""
    engine: str
    case: CaseId
    alpha: float
    tau: Fraction
    h: Fraction
    variant: Variant = Variant.STANDARD
    mode: NonlinearityMode = NonlinearityMode.CENTRAL
    fp_tol: float = 1e-12
    fp_max_iter: int = 200
    verify: bool = True

    @property
    def label(self) -> str:
        if self.engine == REFERENCE:
            return f"l1-{self.mode.value}"
        return self.variant.value


def build_stepper(job: RunJob, problem: Optional[ProblemSpec] = None):
    """Problem, grid and stepper for a job; a problem can be passed in to override the case"""
    problem = problem or problem_for(job.case, job.alpha)
    big_n = step_count(problem.final_time, job.tau, 'tau')
    big_m = step_count(problem.b - problem.a, job.h, 'h')
    params = FractionalParams(alpha=job.alpha, tau=float(job.tau), big_n=big_n)
    grid = SpaceGrid(problem.a, problem.b, big_m)

    if job.engine == REFERENCE:
        config = L1Config(params, grid, problem, nonlinearity_mode=job.mode,
                          fp_tol=job.fp_tol, fp_max_iter=job.fp_max_iter)
    else:
        config = SchemeConfig(params, grid, problem, variant=job.variant)

    stepper = SchemeRegistry.create_stepper(job.engine, config, verify=job.verify)
    if stepper is None:
        raise ValueError(f"Unknown scheme '{job.engine}'. Valid schemes: {SchemeRegistry.list_schemes()}")
    return stepper


def run_job(job: RunJob) -> Tuple[ConvergenceRow, RunResult]:
    """Integrate one job to T and summarize it"""
    stepper = build_stepper(job)
    result = stepper.run()

    breaches = result.breaches
    if breaches:
        worst = max(breaches, key=lambda r: r.residual_inf)
        logger.warning(f"{job.label} case {job.case} alpha={job.alpha} tau={job.tau} h={job.h}: "
                       f"{len(breaches)} steps above the residual limit, worst {worst.residual_inf:.3e} "
                       f"at step {worst.n}")

    row = ConvergenceRow(
        alpha=job.alpha,
        case=str(job.case),
        variant=job.label,
        tau=float(job.tau),
        h=float(job.h),
        e2=result.e2,
        wall_time=result.wall_time,
        max_residual=result.max_residual,
        iterations=result.total_iterations,
        breaches=len(breaches),
    )
    e2_text = 'n/a' if row.e2 is None else f"{row.e2:.4e}"
    logger.info(f"{job.label} case {job.case} alpha={job.alpha} tau={job.tau} h={job.h}: "
                f"E2={e2_text}, {stepper.big_n} steps, {row.wall_time:.3f}s")
    return row, result


def _row_only(job: RunJob) -> ConvergenceRow:
    # levels stay in the worker
    row, _ = run_job(job)
    return row


def run_jobs(jobs: Sequence[RunJob], report: ConvergenceReport, workers: int = 1) -> ConvergenceReport:
    """
    Run jobs in order, filling `report`

    Raises:
        StudyError: carrying the partial report when a job fails
    """
    try:
        if workers > 1 and len(jobs) > 1:
            logger.info(f"Running {len(jobs)} jobs on {workers} worker processes")
            with Pool(processes=workers) as pool:
                # imap keeps submission order
                for row in pool.imap(_row_only, jobs):
                    report.append(row)
        else:
            for job in jobs:
                report.append(_row_only(job))
    except Exception as e:
        logger.error(f"Study failed after {len(report)} of {len(jobs)} rows: {e}", exc_info=True)
        raise StudyError(report, e) from e
    return report


def warn_off_nominal(report: ConvergenceReport, nominal: float) -> List[int]:
    """Warn about rates further than RATE_SLACK from `nominal`; returns their row indices"""
    flagged = []
    for index, (row, rate) in enumerate(zip(report.rows, report.rates())):
        if rate is not None and abs(rate - nominal) > RATE_SLACK:
            logger.warning(f"{row.variant} case {row.case} alpha={row.alpha} tau={format_step(row.tau)} "
                           f"h={format_step(row.h)}: rate {rate:.4f} is far from the nominal order {nominal:g}")
            flagged.append(index)
    return flagged


def _study_jobs(plan: StudyPlan) -> List[RunJob]:
    jobs = []
    for case, alpha in plan.pairs():
        for entry in plan.ladder:
            tau, h = plan.steps(entry)
            jobs.append(RunJob(LINEARIZED, case, alpha, tau, h, variant=plan.variant, verify=plan.verify))
    return jobs


def _run_study(plan: StudyPlan, expected: Direction) -> ConvergenceReport:
    if plan.direction is not expected:
        raise ValueError(f"plan refines in {plan.direction.value}, this study needs {expected.value}")
    fixed = 'h' if expected is Direction.TIME else 'tau'
    report = ConvergenceReport(
        direction=expected.value,
        metadata=build_metadata(
            title=f"{expected.value} refinement, {plan.variant.value}, {fixed}={plan.fixed_step}",
            cases=','.join(str(c) for c in plan.cases),
            alphas=','.join(str(a) for a in plan.alphas),
        ),
    )
    jobs = _study_jobs(plan)
    logger.info(f"Starting {expected.value} study: {len(jobs)} runs, ladder {[str(s) for s in plan.ladder]}")
    run_jobs(jobs, report, workers=plan.workers)
    warn_off_nominal(report, NOMINAL_ORDER[(expected, plan.variant)])
    logger.info(f"Finished {expected.value} study in {report.total_wall_time:.2f}s of solver time")
    return report


def run_time_study(plan: StudyPlan) -> ConvergenceReport:
    """E2 and Rate1 over a tau ladder at fixed h"""
    return _run_study(plan, Direction.TIME)


def run_space_study(plan: StudyPlan) -> ConvergenceReport:
    """E2 and Rate2 over an h ladder at fixed tau"""
    return _run_study(plan, Direction.SPACE)


@dataclass
class Comparison:
    """Paired reports of the linearized scheme and the L1 reference"""
    linearized: ConvergenceReport
    reference: ConvergenceReport

    def faster(self) -> List[str]:
        """Engine with the smaller wall time, per row"""
        return [LINEARIZED if ours.wall_time < theirs.wall_time else REFERENCE
                for ours, theirs in zip(self.linearized.rows, self.reference.rows)]

    def summary(self) -> List[str]:
        lines = []
        for ours, theirs, winner in zip(self.linearized.rows, self.reference.rows, self.faster()):
            lines.append(f"tau={Fraction(ours.tau).limit_denominator(10 ** 7)}: "
                         f"linearized {ours.wall_time:.3f}s vs {theirs.variant} {theirs.wall_time:.3f}s "
                         f"-> {winner} faster")
        return lines

    @property
    def linearized_always_faster(self) -> bool:
        return all(winner == LINEARIZED for winner in self.faster())


def run_comparison(plan: ComparisonPlan) -> Comparison:
    """
    Both engines on the same tau ladder, serially so wall times are comparable

    Raises:
        ComparisonError: with both partial reports; `report` is the engine that failed
    """
    metadata = dict(case=str(plan.case), alpha=plan.alpha, h=str(plan.h))
    linearized = ConvergenceReport('time', metadata=build_metadata(
        title=f"linearized scheme, h={plan.h}", **metadata))
    reference = ConvergenceReport('time', metadata=build_metadata(
        title=f"L1 reference ({plan.mode.value}), h={plan.h}", **metadata))

    logger.info(f"Comparing linearized and L1 ({plan.mode.value}) on {len(plan.ladder)} time steps")
    comparison = Comparison(linearized, reference)
    for tau in plan.ladder:
        try:
            run_jobs([RunJob(LINEARIZED, plan.case, plan.alpha, tau, plan.h, verify=plan.verify)], linearized)
            run_jobs([RunJob(REFERENCE, plan.case, plan.alpha, tau, plan.h, mode=plan.mode,
                             fp_tol=plan.fp_tol, fp_max_iter=plan.fp_max_iter, verify=plan.verify)], reference)
        except StudyError as e:
            raise ComparisonError(comparison, e.report, e.cause) from e.cause

    warn_off_nominal(linearized, NOMINAL_ORDER[(Direction.TIME, Variant.STANDARD)])
    # L1 is first order plus 2 - alpha in time
    warn_off_nominal(reference, 3.0 - plan.alpha)

    for line in comparison.summary():
        logger.info(line)
    if not comparison.linearized_always_faster:
        logger.warning("L1 reference was faster on at least one row")
    return comparison


def perturb_initial_value(problem: ProblemSpec, epsilon: float) -> ProblemSpec:
    """phi + epsilon sin(pi (x-a)/(b-a)); the exact solution no longer applies"""
    a, b = problem.a, problem.b
    wave = np.pi / (b - a)
    base_phi, base_phi_xx = problem.phi, problem.phi_xx
    return dataclasses.replace(
        problem,
        name=f"{problem.name}+{epsilon:g}",
        phi=lambda x: base_phi(x) + epsilon * np.sin(wave * (x - a)),
        phi_xx=lambda x: base_phi_xx(x) - epsilon * wave ** 2 * np.sin(wave * (x - a)),
        exact=None,
        exact_t=None,
        exact_tt=None,
        exact_xx=None,
    )


@dataclass
class StabilityProbe:
    """Response max_n ||eta^n|| to each initial perturbation size"""
    epsilons: List[float]
    responses: List[float]

    def ratios(self) -> List[float]:
        """Response ratio between consecutive perturbation sizes"""
        return [fine / coarse if coarse > 0 else float('inf')
                for coarse, fine in zip(self.responses, self.responses[1:])]


def run_stability_probe(case: CaseId, alpha: float, big_m: int, big_n: int,
                        epsilons: Sequence[float] = (1e-3, 2e-3),
                        variant: Variant = Variant.STANDARD,
                        perturb: Callable[[ProblemSpec, float], ProblemSpec] = perturb_initial_value
                        ) -> StabilityProbe:
    """
    Perturb phi and measure how far the numerical solution moves

    Args:
        case: Case id of the unperturbed problem
        alpha: Caputo order
        big_m: Number of space intervals
        big_n: Number of time steps
        epsilons: Perturbation amplitudes
        variant: Spatial variant of the linearized scheme
        perturb: Builds the perturbed problem from (problem, epsilon)
    """
    if not epsilons:
        raise ValueError("stability probe needs at least one perturbation size")
    problem = problem_for(case, alpha)
    job = RunJob(LINEARIZED, case, alpha,
                 Fraction(str(problem.final_time)) / big_n,
                 Fraction(str(problem.b - problem.a)) / big_m,
                 variant=variant)
    grid = SpaceGrid(problem.a, problem.b, big_m)

    baseline = build_stepper(job, problem).run().levels
    responses = []
    for epsilon in epsilons:
        levels = build_stepper(job, perturb(problem, epsilon)).run().levels
        response = max(norm_l2(GridFunction(grid, row)) for row in levels - baseline)
        logger.info(f"Perturbation {epsilon:g}: max_n |eta^n| = {response:.4e}")
        responses.append(response)
    return StabilityProbe(list(epsilons), responses)
