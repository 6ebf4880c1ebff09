import numpy as np
import pytest

from svie.exceptions import DomainError, GridError, RegressionError
from svie.experiment import (
    CSV_HEADER,
    ErrorTable,
    estimate_rate,
    holder_exponent,
    path_squared_errors,
    strong_error,
    strong_errors,
    theoretical_rate,
)
from svie.problem import zero_problem
from svie.scheme import CLASSICAL_EM, RANDOMIZED_EM, RANDOMIZED_MILSTEIN

SEED = 777


def _exact_table(slope, constant=0.8, levels=(16, 32, 64, 128)):
    return ErrorTable([(n, 1.0 / n, constant * (1.0 / n) ** slope, 0.0, 100) for n in levels])


def test_level_equal_to_reference_has_no_error(sin_cos):
    errors = path_squared_errors(sin_cos, [4, 8], 8, SEED, 0)
    assert errors.shape == (1, 2)
    assert errors[0, 1] == 0.0
    assert errors[0, 0] > 0.0


def test_reference_carries_the_correction_term(sin_cos):
    milstein = path_squared_errors(sin_cos, [8], 8, SEED, 0)
    euler = path_squared_errors(sin_cos, [8], 8, SEED, 0, schemes=(RANDOMIZED_EM,))
    assert milstein[0, 0] == 0.0
    assert euler[0, 0] > 0.0


def test_reference_needs_a_sub_grid(sin_cos):
    with pytest.raises(DomainError):
        path_squared_errors(sin_cos, [4, 8], 8, SEED, 0, ref_refine=1)
    with pytest.raises(DomainError):
        strong_error(sin_cos, [4, 8], 8, 3, SEED, ref_refine=1)


def test_zero_problem_has_zero_error():
    tables = strong_errors(zero_problem(), [2, 4], 8, 3, SEED, schemes=(RANDOMIZED_MILSTEIN, CLASSICAL_EM))
    for table in tables.values():
        assert np.all(table.errors == 0.0)
        assert all(row.std_error == 0.0 for row in table)


def test_rows_sorted_by_descending_step(sin_cos):
    table = strong_error(sin_cos, [8, 2, 4], 8, 4, SEED)
    assert [row.coarse_n for row in table] == [2, 4, 8]
    assert table.row(4).h == 0.25
    assert table.row(4).paths == 4
    with pytest.raises(KeyError):
        table.row(16)


def test_results_do_not_depend_on_workers(sin_cos):
    kwargs = dict(schemes=(RANDOMIZED_MILSTEIN, RANDOMIZED_EM))
    serial = strong_errors(sin_cos, [2, 4], 8, 6, SEED, workers=1, **kwargs)
    pooled = strong_errors(sin_cos, [2, 4], 8, 6, SEED, workers=2, **kwargs)
    for scheme_tag in serial:
        assert serial[scheme_tag] == pooled[scheme_tag]


def test_max_metric_dominates_terminal(sin_cos):
    terminal = path_squared_errors(sin_cos, [2, 4], 8, SEED, 1)
    over_nodes = path_squared_errors(sin_cos, [2, 4], 8, SEED, 1, metric='max')
    assert np.all(over_nodes >= terminal)


def test_invalid_studies(sin_cos):
    with pytest.raises(GridError):
        strong_error(sin_cos, [3, 4], 8, 4, SEED)
    with pytest.raises(GridError):
        strong_error(sin_cos, [], 8, 4, SEED)
    with pytest.raises(DomainError):
        strong_error(sin_cos, [2, 4], 8, 1, SEED)
    with pytest.raises(DomainError):
        strong_error(sin_cos, [2, 4], 8, 4, SEED, metric='mean')
    with pytest.raises(DomainError):
        strong_error(sin_cos, [2, 4], 8, 4, SEED, scheme_tag='heun')


def test_rate_of_exact_power_law():
    estimate = estimate_rate(_exact_table(0.7), 0.3, 0.1)
    assert estimate.slope == pytest.approx(0.7, abs=1e-12)
    assert estimate.r_squared == pytest.approx(1.0, abs=1e-12)
    assert estimate.intercept == pytest.approx(np.log2(0.8), abs=1e-12)
    assert estimate.theoretical == pytest.approx(0.7)
    assert estimate.as_dict()['holder'] == pytest.approx(0.4)


def test_theoretical_and_holder_exponents():
    assert theoretical_rate(0.3, 0.1) == pytest.approx(0.7)
    assert theoretical_rate(0.2, 0.3) == pytest.approx(0.4)
    assert holder_exponent(0.3, 0.1) == pytest.approx(0.4)
    assert holder_exponent(0.2, 0.3) == pytest.approx(0.2)
    assert holder_exponent(0.45, 0.0) == pytest.approx(0.5)


def test_zero_rows_are_left_out_of_the_fit():
    rows = [(n, 1.0 / n, 0.5 * (1.0 / n) ** 0.5, 0.01, 10) for n in (4, 8, 16)] + [(32, 1.0 / 32, 0.0, 0.0, 10)]
    estimate = estimate_rate(ErrorTable(rows), 0.2, 0.3)
    assert estimate.slope == pytest.approx(0.5, abs=1e-12)


def test_rate_needs_two_positive_rows():
    rows = [(4, 0.25, 0.1, 0.0, 10), (8, 0.125, 0.0, 0.0, 10)]
    with pytest.raises(RegressionError):
        estimate_rate(ErrorTable(rows), 0.3, 0.1)


def test_negative_errors_are_rejected():
    with pytest.raises(DomainError):
        ErrorTable([(4, 0.25, -0.1, 0.0, 10)])


def test_error_table_csv(tmp_path):
    table = _exact_table(0.5)
    path = tmp_path / 'errors.csv'
    table.to_csv(str(path))
    lines = path.read_text().splitlines()
    assert lines[0] == ','.join(CSV_HEADER)
    assert len(lines) == 5
    assert lines[1].startswith('16,0.0625,')
    loaded = ErrorTable.from_csv(str(path))
    assert [row.coarse_n for row in loaded] == [16, 32, 64, 128]
    assert loaded.errors == pytest.approx(table.errors, rel=1e-9)


def test_error_table_csv_header_is_checked(tmp_path):
    path = tmp_path / 'bad.csv'
    path.write_text('level,h,error\n4,0.25,0.1\n')
    with pytest.raises(DomainError):
        ErrorTable.from_csv(str(path))


@pytest.mark.slow
@pytest.mark.parametrize('fixture, expected', [('sin_cos', 0.7), ('rough_sin_cos', 0.4)])
def test_empirical_rate_near_theory(request, fixture, expected):
    problem = request.getfixturevalue(fixture)
    table = strong_error(problem, [16, 32, 64, 128], 256, 300, SEED, workers=2)
    errors = table.errors
    assert errors[0] > errors[-1]
    assert np.all(np.diff(errors) < 0.0) or np.sum(np.diff(errors) > 0.0) == 1
    estimate = estimate_rate(table, problem.alpha, problem.beta)
    assert estimate.slope == pytest.approx(expected, abs=0.15)


@pytest.mark.slow
def test_milstein_not_worse_than_euler(rough_sin_cos):
    tables = strong_errors(rough_sin_cos, [16, 32, 64], 256, 200, SEED,
                           schemes=(RANDOMIZED_MILSTEIN, CLASSICAL_EM), workers=2)
    milstein, euler = tables[RANDOMIZED_MILSTEIN], tables[CLASSICAL_EM]
    for level in (16, 32, 64):
        m, e = milstein.row(level), euler.row(level)
        assert m.l2_error <= e.l2_error + 2.0 * (m.std_error + e.std_error)
