import numpy as np
import pytest
from scipy import integrate

from svie.exceptions import DomainError, GridError
from svie.kernel import integral_power_kernel
from svie.quadrature import (
    DB,
    DR,
    difference_kernel_sum,
    local_singular_sum,
    node_index,
    singular_ito_sum,
)
from svie.randomness import GridSpec, coarsen_increments, generate_fine_noise

from tests.helpers import fixed_noise


@pytest.fixture
def noise():
    # 16 fine cells of width 1/16 on [0, 1]
    return generate_fine_noise(99, 0, GridSpec(1.0, 4, 4), [4])


def test_node_index(noise):
    assert node_index(noise, 0.0) == 0
    assert node_index(noise, 0.25) == 4
    assert node_index(noise, 1.0) == 16
    with pytest.raises(GridError):
        node_index(noise, 0.03)
    with pytest.raises(GridError):
        node_index(noise, 1.0625)


def test_singular_ito_sum_zero_state(noise):
    assert singular_ito_sum(0.3, 1.0, (0.0, 0.5), 0.0, noise) == 0.0


def test_singular_ito_sum_single_cell():
    step, w = 0.125, 0.37
    noise = fixed_noise([w, -1.0], step)
    value = singular_ito_sum(0.3, 2 * step, (0.0, step), 1.0, noise)
    assert value == pytest.approx((2 * step) ** -0.3 * w, rel=1e-14)


def test_singular_ito_sum_abutting_window_uses_left_endpoints():
    step = 0.25
    increments = [0.1, -0.2, 0.3, 0.4]
    noise = fixed_noise(increments, step)
    value = singular_ito_sum(0.4, 1.0, (0.0, 1.0), 2.0, noise)
    expected = sum((1.0 - k * step) ** -0.4 * 2.0 * dB for k, dB in enumerate(increments))
    assert np.isfinite(value)
    assert value == pytest.approx(expected, rel=1e-13)


def test_singular_ito_sum_deterministic_surrogate_converges():
    gamma, h = 0.3, 0.5
    exact = integral_power_kernel(gamma, h, 0.0, h)
    errors = []
    for refine in (2 ** 4, 2 ** 6):
        step = h / refine
        noise = fixed_noise(np.full(refine, step), step)
        errors.append(abs(singular_ito_sum(gamma, h, (0.0, h), 1.0, noise) - exact))
    assert errors[0] <= (h / 2 ** 4) ** (1 - gamma) / (1 - gamma)
    assert errors[1] < errors[0]


def test_singular_ito_sum_rejects_bad_windows(noise):
    with pytest.raises(GridError):
        singular_ito_sum(0.3, 1.0, (0.0, 0.3), 1.0, noise)
    with pytest.raises(DomainError):
        singular_ito_sum(0.3, 0.5, (0.0, 0.75), 1.0, noise)
    with pytest.raises(GridError):
        singular_ito_sum(0.3, 1.0, (0.0, 0.25), np.ones(3), noise)


def test_piecewise_state_matches_split_windows(noise):
    state = np.repeat([0.5, -1.5], 4)
    whole = singular_ito_sum(0.2, 0.75, (0.0, 0.5), state, noise)
    parts = singular_ito_sum(0.2, 0.75, (0.0, 0.25), 0.5, noise) + singular_ito_sum(0.2, 0.75, (0.25, 0.5), -1.5, noise)
    assert whole == pytest.approx(parts, rel=1e-13)


@pytest.mark.parametrize('against', [DR, DB])
def test_difference_vanishes_when_s_is_anchor(noise, against):
    assert difference_kernel_sum(0.3, 0.5, 0.5, (0.0, 0.25), 1.0, noise, against) == 0.0


def test_difference_dr_matches_quadrature(noise):
    gamma, anchor, s = 0.3, 0.5, 0.75
    value = difference_kernel_sum(gamma, s, anchor, (0.0, 0.25), 1.0, noise, DR)
    expected, _ = integrate.quad(lambda r: (s - r) ** -gamma - (anchor - r) ** -gamma, 0.0, 0.25,
                                 epsabs=0.0, epsrel=1e-12)
    assert value == pytest.approx(expected, rel=1e-8)
    assert value < 0.0


def test_difference_db_single_cell():
    step, w = 0.25, -0.6
    noise = fixed_noise([w, 0.2, 0.3, 0.4], step)
    value = difference_kernel_sum(0.4, 0.9, 0.5, (0.0, 0.25), 3.0, noise, DB)
    assert value == pytest.approx((0.9 ** -0.4 - 0.5 ** -0.4) * 3.0 * w, rel=1e-13)


def test_difference_ordering_errors(noise):
    with pytest.raises(DomainError):
        difference_kernel_sum(0.3, 0.75, 0.25, (0.0, 0.5), 1.0, noise, DR)
    with pytest.raises(DomainError):
        difference_kernel_sum(0.3, 0.4, 0.5, (0.0, 0.25), 1.0, noise, DB)
    with pytest.raises(ValueError):
        difference_kernel_sum(0.3, 0.75, 0.5, (0.0, 0.25), 1.0, noise, 'ds')


def test_difference_vectorized_over_s(noise):
    s = np.array([0.5, 0.5625, 0.8, 1.0])
    for against in (DR, DB):
        together = difference_kernel_sum(0.25, s, 0.5, (0.0, 0.5), 0.8, noise, against)
        one_by_one = [difference_kernel_sum(0.25, value, 0.5, (0.0, 0.5), 0.8, noise, against) for value in s]
        assert together == pytest.approx(one_by_one, rel=1e-14, abs=1e-15)


@pytest.mark.parametrize('against', [DR, DB])
def test_local_sum_empty_window(noise, against):
    assert local_singular_sum(0.3, 0.25, 0.25, 2.0, noise, against) == 0.0


def test_local_dr_closed_form(noise):
    assert local_singular_sum(0.25, 1.0, 0.0, 1.0, noise, DR) == pytest.approx(4.0 / 3.0, rel=1e-14)


def test_local_db_four_cells():
    step = 0.125
    increments = [0.2, -0.1, 0.4, -0.3, 9.0]
    noise = fixed_noise(increments, step)
    s = 4 * step
    expected = sum((s - k * step) ** -0.3 * increments[k] for k in range(4))
    assert local_singular_sum(0.3, s, 0.0, 1.0, noise, DB) == pytest.approx(expected, rel=1e-13)


def test_local_db_truncated_window():
    step = 0.125
    increments = [0.2, -0.1, 0.4, -0.3]
    noise = fixed_noise(increments, step)
    s = 0.3
    expected = sum((s - k * step) ** -0.2 * increments[k] for k in range(2))
    assert local_singular_sum(0.2, s, 0.0, 1.0, noise, DB, window_end=0.25) == pytest.approx(expected, rel=1e-13)
    with pytest.raises(GridError):
        local_singular_sum(0.2, s, 0.0, 1.0, noise, DB)


def test_local_vectorized_over_s(noise):
    s = np.array([0.25, 0.3125, 0.375, 0.4375])
    for against in (DR, DB):
        together = local_singular_sum(0.35, s, 0.25, 1.7, noise, against)
        one_by_one = [local_singular_sum(0.35, value, 0.25, 1.7, noise, against) for value in s]
        assert together == pytest.approx(one_by_one, rel=1e-14, abs=1e-15)


def test_local_ordering_error(noise):
    with pytest.raises(DomainError):
        local_singular_sum(0.3, 0.25, 0.5, 1.0, noise, DB)


def test_linearity_in_state(noise):
    c = 2.0
    pairs = [
        (singular_ito_sum(0.3, 1.0, (0.0, 0.5), 0.7, noise), singular_ito_sum(0.3, 1.0, (0.0, 0.5), c * 0.7, noise)),
        (difference_kernel_sum(0.3, 0.9, 0.5, (0.0, 0.5), 0.7, noise, DB),
         difference_kernel_sum(0.3, 0.9, 0.5, (0.0, 0.5), c * 0.7, noise, DB)),
        (difference_kernel_sum(0.3, 0.9, 0.5, (0.0, 0.5), 0.7, noise, DR),
         difference_kernel_sum(0.3, 0.9, 0.5, (0.0, 0.5), c * 0.7, noise, DR)),
        (local_singular_sum(0.3, 0.75, 0.5, 0.7, noise, DB), local_singular_sum(0.3, 0.75, 0.5, c * 0.7, noise, DB)),
    ]
    for base, scaled in pairs:
        assert scaled == c * base


def test_refinement_consistency():
    gamma, h, t_star = 0.3, 0.25, 0.5
    finest = 2 ** 7
    ratios = []
    for trial in range(50):
        grid = GridSpec(t_star, 2, finest)
        path = generate_fine_noise(31, trial, grid, [2]).fine_increments
        sums = []
        for refine in (2 ** 3, 2 ** 4, 2 ** 5, 2 ** 6, 2 ** 7):
            increments = coarsen_increments(path, finest // refine)
            noise = fixed_noise(increments, t_star / increments.size)
            sums.append(singular_ito_sum(gamma, t_star, (0.0, h), 1.0, noise))
        differences = np.abs(np.diff(sums))
        ratios.extend(differences[1:] / differences[:-1])
    assert np.median(ratios) < 1.0


def test_ito_isometry():
    gamma, h, t_star = 0.3, 0.25, 0.5
    grid = GridSpec(t_star, 2, 64)
    values = np.array([
        singular_ito_sum(gamma, t_star, (0.0, h), 1.0, generate_fine_noise(17, p, grid, [2]))
        for p in range(10 ** 4)
    ])
    expected = integral_power_kernel(2 * gamma, t_star, 0.0, h)
    assert np.var(values, ddof=1) == pytest.approx(expected, rel=0.05)
