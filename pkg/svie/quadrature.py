'''Riemann-Stieltjes and closed-form discretizations of the singular integrals

All stochastic ("dB") sums are left-point sums over the fine cells of a
FineNoise, which keeps them non-anticipating and keeps the kernel finite when
a window ends at the singular time. Lebesgue ("dr") integrals are exact.

Integrands are piecewise constant: ``state_value`` is either one number for
the whole window or one value per fine cell of the window. Inner times ``s``
may be arrays, in which case one result per element is returned.
'''
import numpy as np

from .exceptions import DomainError, GridError
from .kernel import KernelExponent, integral_power_kernel, power

DR = 'dr'
DB = 'dB'
INTEGRATORS = (DR, DB)

ALIGNMENT_TOLERANCE = 1e-9


def node_index(noise, time):
    '''Index m of the fine node m * fine_step equal to ``time``'''
    position = float(time) / noise.fine_step
    index = int(round(position))
    if abs(position - index) > ALIGNMENT_TOLERANCE * max(1.0, abs(position)):
        raise GridError(f'time {time!r} is not aligned to the fine grid (step {noise.fine_step!r})')
    if not 0 <= index <= noise.fine_cells:
        raise GridError(f'time {time!r} lies outside the fine grid [0, {noise.horizon!r}]')
    return index


def cell_range(noise, window):
    '''Fine cells [start, stop) covering an aligned window [a, b]'''
    a, b = window
    if a > b:
        raise DomainError(f'window [{a!r}, {b!r}] is reversed')
    return node_index(noise, a), node_index(noise, b)


def _state(state_value, cells):
    state = np.asarray(state_value, dtype=float)
    if state.ndim == 0:
        return state
    if state.shape != (cells,):
        raise GridError(f'piecewise integrand has {state.size} values for {cells} fine cells')
    return state


def _check_integrator(against):
    if against not in INTEGRATORS:
        raise ValueError(f'integrator must be one of {INTEGRATORS}, got {against!r}')


def singular_ito_sum(gamma, t_star, window, state_value, noise):
    '''Left-point sum of (t_star - s_k)^(-gamma) * state * dB_k over the cells of ``window``'''
    gamma = KernelExponent(gamma)
    if window[1] > t_star:
        raise DomainError('window passes the kernel singularity (b > t_star)')
    start, stop = cell_range(noise, window)
    state = _state(state_value, stop - start)
    left = noise.nodes[start:stop]
    weights = power(t_star - left, -gamma)
    return np.sum(weights * state * noise.fine_increments[start:stop])


def difference_kernel_sum(gamma, s, anchor, window, state_value, noise, against):
    '''Integral of [(s-r)^(-gamma) - (anchor-r)^(-gamma)] * state over ``window``

    ``dr``: exact, from two antiderivative differences per fine cell.
    ``dB``: left-point Riemann-Stieltjes sum. Needs window <= anchor <= s.
    '''
    gamma = KernelExponent(gamma)
    _check_integrator(against)
    s = np.asarray(s, dtype=float)
    if window[1] > anchor:
        raise DomainError('window must end at or before the anchor')
    if np.any(s < anchor):
        raise DomainError('inner time s must not precede the anchor')
    start, stop = cell_range(noise, window)
    state = _state(state_value, stop - start)
    left = noise.nodes[start:stop]
    inner = s[..., np.newaxis]

    if against == DR:
        right = noise.nodes[start + 1:stop + 1]
        bracket = integral_power_kernel(gamma, inner, left, right) - integral_power_kernel(gamma, anchor, left, right)
        return np.sum(bracket * state, axis=-1)

    bracket = power(inner - left, -gamma) - power(anchor - left, -gamma)
    return np.sum(bracket * (state * noise.fine_increments[start:stop]), axis=-1)


def local_singular_sum(gamma, s, window_start, state_value, noise, against, window_end=None):
    '''Integral of (s-r)^(-gamma) * state over r in [window_start, s]

    ``dr``: exact closed form state * (s - window_start)^(1-gamma) / (1-gamma).
    ``dB``: left-point sum over the fine cells in [window_start, s). When s is
    not a fine node, ``window_end`` names the last node the sum runs to.
    '''
    gamma = KernelExponent(gamma)
    _check_integrator(against)
    s = np.asarray(s, dtype=float)
    if np.any(s < window_start):
        raise DomainError('inner time s must not precede the window start')
    state = np.asarray(state_value, dtype=float)
    if state.ndim:
        raise GridError('local sums take one integrand value for the whole window')

    if against == DR:
        return state * integral_power_kernel(gamma, s, window_start, s)

    start = node_index(noise, window_start)
    if window_end is None:
        stops = np.array([node_index(noise, value) for value in np.ravel(s)]).reshape(s.shape)
    else:
        if np.any(window_end > s) or window_end < window_start:
            raise DomainError('window end must lie in [window_start, s]')
        stops = np.full(s.shape, node_index(noise, window_end))
    stop = int(np.max(stops, initial=start))

    left = noise.nodes[start:stop]
    inside = np.arange(start, stop) < stops[..., np.newaxis]
    lag = np.where(inside, s[..., np.newaxis] - left, 1.0)
    weights = np.where(inside, power(lag, -gamma), 0.0)
    return state * np.sum(weights * noise.fine_increments[start:stop], axis=-1)
