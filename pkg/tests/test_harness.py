#!/usr/bin/env python3
"""
Study harness tests - plans, rates, report files and the command line
"""

import csv
import logging
import math
from fractions import Fraction

import numpy as np
import pytest

from harness import (
    CSV_HEADER,
    NOMINAL_ORDER,
    RATE_PLACEHOLDER,
    ComparisonError,
    ComparisonPlan,
    ConvergenceReport,
    ConvergenceRow,
    Direction,
    StudyPlan,
    convergence_rate,
    emit,
    load_config,
    load_preset,
    load_report,
    make_ladder,
    merge_settings,
    parse_step,
    problem_for,
    render_markdown,
    run_comparison,
    run_space_study,
    run_stability_probe,
    run_time_study,
    step_count,
    warn_off_nominal,
)
from harness.plan import validate_ladder
from schemes import Variant

from conftest import ROOT

PRESETS = ROOT / 'config' / 'tables.yaml'


def small_plan(direction=Direction.TIME, **overrides):
    settings = merge_settings({
        'case': [1], 'alpha': [1.5], 'variant': 'std',
        'h': '1/16', 'tau': '1/8', 'ladder': 2,
    }, overrides)
    return StudyPlan.from_settings(settings, direction)


def row(e2, tau=0.1, alpha=1.5, case='1'):
    return ConvergenceRow(alpha=alpha, case=case, variant='std', tau=tau, h=0.01, e2=e2, wall_time=0.5)


# ---------------------------------------------------------------------------
# steps and ladders
# ---------------------------------------------------------------------------

def test_parse_step():
    assert parse_step('1/1000') == Fraction(1, 1000)
    assert parse_step(' 1/20 ') == Fraction(1, 20)
    assert parse_step(0.05) == Fraction(1, 20)
    assert parse_step('0.25') == Fraction(1, 4)
    assert parse_step(Fraction(1, 3)) == Fraction(1, 3)


@pytest.mark.parametrize('value', ['0', '-1/2', 'abc', '1/0', True])
def test_parse_step_rejects(value):
    with pytest.raises(ValueError):
        parse_step(value)


def test_step_count():
    assert step_count(1.0, Fraction(1, 3)) == 3
    assert step_count(2.0, Fraction(1, 4)) == 8
    with pytest.raises(ValueError):
        step_count(1.0, Fraction(2, 3))


def test_ladder():
    assert make_ladder('1/20', 3) == (Fraction(1, 20), Fraction(1, 40), Fraction(1, 80), Fraction(1, 160))
    assert make_ladder('1/4', 0) == (Fraction(1, 4),)
    with pytest.raises(ValueError):
        make_ladder('1/4', -1)


def test_ladder_must_halve():
    validate_ladder((Fraction(1, 10), Fraction(1, 20)))
    with pytest.raises(ValueError):
        validate_ladder((Fraction(1, 10), Fraction(1, 30)))
    with pytest.raises(ValueError):
        validate_ladder(())


def test_plan_from_settings():
    plan = small_plan(case=['1', 'zero', 3], alpha=[1.2, 1.8], variant='compact')
    assert plan.cases == (1, 'zero', 3)
    assert plan.alphas == (1.2, 1.8)
    assert plan.variant is Variant.COMPACT
    assert plan.steps(plan.ladder[1]) == (Fraction(1, 16), Fraction(1, 16))
    assert len(list(plan.pairs())) == 6

    space = small_plan(Direction.SPACE)
    assert space.fixed_step == Fraction(1, 8)
    assert space.ladder[0] == Fraction(1, 16)


def test_linear_case_id():
    plan = small_plan(case=['Linear', 2])
    assert plan.cases == ('linear', 2)
    assert problem_for('linear', 1.5).f(np.array([1.0, 2.0])).tolist() == [0.0, 0.0]


@pytest.mark.parametrize('overrides', [{'case': [7]}, {'alpha': [2.5]}, {'format': 'xlsx'}, {'workers': 0}])
def test_plan_rejects(overrides):
    with pytest.raises(ValueError):
        small_plan(**overrides)


def test_comparison_plan_single_pair():
    settings = merge_settings({'case': [1, 2], 'alpha': [1.8]})
    with pytest.raises(ValueError):
        ComparisonPlan.from_settings(settings)


# ---------------------------------------------------------------------------
# settings files
# ---------------------------------------------------------------------------

def test_merge_precedence():
    merged = merge_settings({'alpha': [1.2], 'h': '1/10'}, {'alpha': [1.3]}, {'alpha': None, 'tau': '1/7'})
    assert merged['alpha'] == [1.3]
    assert merged['h'] == '1/10'
    assert merged['tau'] == '1/7'
    assert merged['variant'] == 'std'


def test_load_config(tmp_path):
    path = tmp_path / 'study.yaml'
    path.write_text("case: [2]\nalpha: [1.8]\nh: 1/1000\n")
    data = load_config(path)
    assert data == {'case': [2], 'alpha': [1.8], 'h': '1/1000'}


def test_load_config_unknown_key(tmp_path):
    path = tmp_path / 'study.yaml'
    path.write_text("smoothing: true\n")
    with pytest.raises(ValueError):
        load_config(path)


def test_repository_presets():
    for name in ('table1', 'table2', 'table3', 'table4', 'table5', 'stability'):
        preset = load_preset(name, PRESETS)
        assert 'command' in preset
    table1 = load_preset('table1', PRESETS)
    plan = StudyPlan.from_settings(merge_settings(table1), Direction.TIME)
    assert plan.fixed_step == Fraction(1, 1000)
    assert plan.ladder[-1] == Fraction(1, 160)
    with pytest.raises(ValueError):
        load_preset('table9', PRESETS)


def test_repository_study_file():
    data = load_config(ROOT / 'config' / 'study.yaml')
    StudyPlan.from_settings(merge_settings(data), Direction.TIME)


# ---------------------------------------------------------------------------
# rates and report files
# ---------------------------------------------------------------------------

def test_convergence_rate():
    assert convergence_rate(4e-3, 1e-3) == pytest.approx(2.0)
    assert convergence_rate(1.0, 1.0 / 16) == pytest.approx(4.0)
    assert convergence_rate(0.0, 0.0) is None
    assert convergence_rate(None, 1e-3) is None
    assert convergence_rate(1e-3, float('nan')) is None


def test_rates_restart_per_group():
    report = ConvergenceReport('time', rows=[row(4e-3), row(1e-3), row(8e-3, alpha=1.8), row(2e-3, alpha=1.8)])
    rates = report.rates()
    assert rates[0] is None and rates[2] is None
    assert rates[1] == pytest.approx(2.0)
    assert rates[3] == pytest.approx(2.0)


def test_empty_csv(tmp_path):
    path = emit(ConvergenceReport('time'), 'csv', tmp_path / 'empty.csv')
    lines = path.read_text().splitlines()
    assert lines == [','.join(CSV_HEADER)]


def test_one_row_csv(tmp_path):
    report = ConvergenceReport('time', rows=[row(2.5994e-03, tau=0.05)])
    path = emit(report, 'csv', tmp_path / 'one.csv')
    lines = path.read_text().splitlines()
    assert len(lines) == 2
    with open(path, newline='') as f:
        record = next(csv.DictReader(f))
    assert record['rate'] == ''
    assert float(record['E2']) == 2.5994e-03
    assert float(record['tau']) == 0.05


def test_markdown_style():
    report = ConvergenceReport('time', rows=[row(3.0095e-03, tau=1 / 20), row(7.5142e-04, tau=1 / 40)])
    text = render_markdown(report)
    assert RATE_PLACEHOLDER in text
    assert '3.0095e-03' in text
    assert '1/20' in text and '1/40' in text
    assert f"{math.log2(3.0095e-03 / 7.5142e-04):.4f}" in text
    assert 'Rate1' in text


def test_unknown_format(tmp_path):
    with pytest.raises(ValueError):
        emit(ConvergenceReport('time'), 'xlsx', tmp_path / 'out.xlsx')


def test_load_report_checks_header(tmp_path):
    path = tmp_path / 'bad.csv'
    path.write_text('a,b,c\n1,2,3\n')
    with pytest.raises(ValueError):
        load_report(path)


# ---------------------------------------------------------------------------
# studies
# ---------------------------------------------------------------------------

def test_zero_ladder():
    report = run_time_study(small_plan(case=['zero']))
    assert report.e2_column == [0.0, 0.0, 0.0]
    assert report.rates() == [None, None, None]
    assert render_markdown(report).count(RATE_PLACEHOLDER) == 3


def test_single_entry_ladder():
    report = run_space_study(small_plan(Direction.SPACE, ladder=0))
    assert len(report) == 1
    assert report.rates() == [None]


def test_study_direction_checked():
    with pytest.raises(ValueError):
        run_space_study(small_plan(Direction.TIME))


def test_rates_survive_csv(tmp_path):
    report = run_time_study(small_plan(alpha=[1.3, 1.7]))
    path = emit(report, 'csv', tmp_path / 'study.csv')
    loaded = load_report(path)
    assert loaded.e2_column == report.e2_column
    for recorded, recomputed in zip(loaded.recorded_rates, loaded.rates()):
        if recorded is None:
            assert recomputed is None
        else:
            assert recomputed == pytest.approx(recorded, rel=1e-9, abs=1e-9)


def test_studies_are_deterministic():
    first = run_time_study(small_plan(case=[2]))
    second = run_time_study(small_plan(case=[2]))
    assert first.e2_column == second.e2_column


def test_parallel_matches_serial():
    serial = run_space_study(small_plan(Direction.SPACE, case=[1, 3]))
    parallel = run_space_study(small_plan(Direction.SPACE, case=[1, 3], workers=2))
    assert [(r.case, r.h) for r in parallel.rows] == [(r.case, r.h) for r in serial.rows]
    assert parallel.e2_column == serial.e2_column


def test_comparison_shape():
    plan = ComparisonPlan(case=2, alpha=1.8, h=Fraction(1, 20), ladder=make_ladder('1/10', 2))
    comparison = run_comparison(plan)
    assert len(comparison.linearized) == len(comparison.reference) == 3
    assert len(comparison.faster()) == 3
    assert all(r.variant == 'l1-central' for r in comparison.reference.rows)
    assert len(comparison.summary()) == 3


def test_stability_probe():
    probe = run_stability_probe(2, 1.5, 100, 100, epsilons=(1e-3, 2e-3))
    assert all(math.isfinite(r) and r > 0 for r in probe.responses)
    assert 1.6 <= probe.ratios()[0] <= 2.4


def test_comparison_without_nonlinearity():
    plan = ComparisonPlan(case='linear', alpha=1.5, h=Fraction(1, 100), ladder=make_ladder('1/10', 2))
    comparison = run_comparison(plan)
    for ours, theirs in zip(comparison.linearized.e2_column, comparison.reference.e2_column):
        assert 0.1 < ours / theirs < 10.0
    assert all(r > 1.0 for r in comparison.linearized.rates()[1:])
    assert all(r > 1.0 for r in comparison.reference.rates()[1:])


def test_comparison_failure_keeps_both_reports():
    plan = ComparisonPlan(case=2, alpha=1.8, h=Fraction(1, 10), ladder=make_ladder('1/10', 1),
                          fp_tol=1e-300, fp_max_iter=1)
    with pytest.raises(ComparisonError) as info:
        run_comparison(plan)
    comparison = info.value.comparison
    assert len(comparison.linearized) == 1
    assert len(comparison.reference) == 0
    assert info.value.report is comparison.reference


def test_off_nominal_rates_warned(caplog):
    report = ConvergenceReport('time', rows=[row(4e-3), row(1e-3), row(8e-4)])
    with caplog.at_level(logging.WARNING):
        flagged = warn_off_nominal(report, NOMINAL_ORDER[(Direction.TIME, Variant.STANDARD)])
    assert flagged == [2]
    assert 'nominal order 2' in caplog.text


def test_nominal_orders():
    assert NOMINAL_ORDER[(Direction.SPACE, Variant.COMPACT)] == 4.0
    assert {NOMINAL_ORDER[(d, v)] for d in Direction for v in Variant} == {2.0, 4.0}


def test_rows_count_breaches():
    report = run_time_study(small_plan(case=[3]))
    assert all(r.breaches == 0 for r in report.rows)


# ---------------------------------------------------------------------------
# command line
# ---------------------------------------------------------------------------

def test_cli_coeff_dump(capsys):
    import main
    code = main.main(['coeff-dump', '--no-config', '--alpha', '1.5', '--tau', '1/10', '--n', '3'])
    assert code == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == 'k,c,d'
    assert len(lines) == 5


def test_cli_time_study(tmp_path):
    import main
    out = tmp_path / 'study.csv'
    code = main.main(['time-study', '--no-config', '--case', '1', '--alpha', '1.5',
                      '--h', '1/16', '--tau', '1/8', '--ladder', '1', '--out', str(out)])
    assert code == 0
    assert len(load_report(out)) == 2


def test_cli_rejects_bad_steps():
    import main
    with pytest.raises(SystemExit) as info:
        main.main(['solve', '--no-config', '--h', '1/3', '--tau', '2/3'])
    assert info.value.code == 2


def test_cli_coeff_dump_last_row(capsys):
    import main
    code = main.main(['coeff-dump', '--no-config', '--alpha', '1.5', '--tau', '1/10', '--n', '9'])
    assert code == 0
    assert len(capsys.readouterr().out.strip().splitlines()) == 11


@pytest.mark.parametrize('n', ['10', '20', '-1'])
def test_cli_coeff_dump_rejects_row(n):
    import main
    with pytest.raises(SystemExit) as info:
        main.main(['coeff-dump', '--no-config', '--alpha', '1.5', '--tau', '1/10', '--n', n])
    assert info.value.code == 2


def test_cli_comparison_failure_keeps_split_files(tmp_path):
    import main
    out = tmp_path / 'cmp.csv'
    code = main.main(['compare-l1', '--no-config', '--case', '2', '--alpha', '1.8', '--h', '1/10',
                      '--tau', '1/10', '--ladder', '1', '--fp-tol', '1e-300', '--fp-max-iter', '1',
                      '--out', str(out)])
    assert code == 1
    assert not out.exists()
    assert len(load_report(tmp_path / 'cmp-linearized.csv')) == 1
    assert len(load_report(tmp_path / 'cmp-central.csv')) == 0
