'''Time-stepping engines for singular SVIEs

Three schemes consume the same FineNoise:

* ``rmilstein`` -- randomized Milstein: drift evaluated at the randomized
  stage value Y_j, diffusion with the sigma'-weighted correction terms;
* ``rem`` -- randomized Euler-Maruyama: the same without the correction terms;
* ``em`` -- classical left-point Euler-Maruyama with exact kernel weights.

Each X_n is a convolution over the whole history. The inner accumulations
A_j(s) of the correction terms do not depend on n, so they are computed once
per step and kept in a :class:`StageCache`.
'''
import daiquiri
import numpy as np

from .exceptions import CacheError, DomainError, GridError
from .kernel import integral_power_kernel, power
from .quadrature import DB, DR, difference_kernel_sum, local_singular_sum, singular_ito_sum
from .randomness import tau_for_step
from . import utils

log = daiquiri.getLogger(__name__)

RANDOMIZED_MILSTEIN = 'rmilstein'
RANDOMIZED_EM = 'rem'
CLASSICAL_EM = 'em'
SCHEMES = (RANDOMIZED_MILSTEIN, RANDOMIZED_EM, CLASSICAL_EM)


def check_scheme(scheme_tag):
    if scheme_tag not in SCHEMES:
        raise DomainError(f'unknown scheme {scheme_tag!r} (known: {", ".join(SCHEMES)})')
    return scheme_tag


class Trajectory(object):
    '''Coarse-node values X_0 .. X_N of one scheme on one path'''

    def __init__(self, grid, values, scheme_tag):
        self.grid = grid
        self.scheme_tag = check_scheme(scheme_tag)
        self._values = np.array(values, dtype=float)
        self._values.setflags(write=False)
        if self._values.shape != (grid.coarse_n + 1,):
            raise GridError(f'expected {grid.coarse_n + 1} values, got {self._values.size}')

    @property
    def level(self):
        return self.grid.coarse_n

    @property
    def values(self):
        return self._values

    @property
    def times(self):
        return self.grid.nodes

    @property
    def terminal(self):
        return float(self._values[-1])

    def rows(self):
        for n, (t, x) in enumerate(zip(self.times, self._values)):
            yield n, t, x

    def to_csv(self, path):
        '''Write "n,t,x" rows'''
        utils.write_csv(path, ['n', 't', 'x'], (
            (str(n), utils.format_decimal(t), utils.format_decimal(x)) for n, t, x in self.rows()))

    def __repr__(self):
        return f'Trajectory(scheme={self.scheme_tag!r}, level={self.level}, terminal={self.terminal!r})'


class StageCache(object):
    '''Per-step quantities that every later X_n reuses

    For step j: b, sigma and sigma' at X_{j-1}, the stage value Y_j with b(Y_j),
    and the inner accumulations A_j(s) at the left endpoints s of the fine
    cells of [t_{j-1}, t_j).
    '''

    def __init__(self):
        self._drift = []
        self._diffusion = []
        self._derivative = []
        self._stage = []
        self._stage_drift = []
        self._inner = []

    def __len__(self):
        return len(self._drift)

    def record_coefficients(self, j, drift, diffusion, derivative):
        self._expect(self._drift, j)
        self._drift.append(float(drift))
        self._diffusion.append(float(diffusion))
        self._derivative.append(float(derivative))

    def record_stage(self, j, stage, stage_drift):
        self._expect(self._stage, j)
        self._stage.append(float(stage))
        self._stage_drift.append(float(stage_drift))

    def record_inner(self, j, inner):
        self._expect(self._inner, j)
        inner = np.array(inner, dtype=float)
        inner.setflags(write=False)
        self._inner.append(inner)

    @staticmethod
    def _expect(entries, j):
        if j != len(entries) + 1:
            raise CacheError(f'step {j} recorded out of order (next expected {len(entries) + 1})')

    @staticmethod
    def _take(entries, n, what):
        if len(entries) < n:
            raise CacheError(f'{what} cached for {len(entries)} steps, {n} needed')
        return entries[:n]

    def drift_values(self, n):
        return np.array(self._take(self._drift, n, 'drift values'))

    def diffusion_values(self, n):
        return np.array(self._take(self._diffusion, n, 'diffusion values'))

    def derivative_values(self, n):
        return np.array(self._take(self._derivative, n, 'derivative values'))

    def stage_values(self, n):
        return np.array(self._take(self._stage, n, 'stage values'))

    def stage_drift_values(self, n):
        return np.array(self._take(self._stage_drift, n, 'stage drift values'))

    def inner(self, j):
        '''A_j(s) on the left endpoints of the fine cells of step j'''
        if not 1 <= j <= len(self._inner):
            raise CacheError(f'no inner accumulation cached for step {j}')
        return self._inner[j - 1]

    def inner_values(self, n):
        return np.concatenate(self._take(self._inner, n, 'inner accumulations'))


def _history_cells(grid, values, j):
    '''Per fine cell of [0, t_{j-1}] the value held by its coarse cell'''
    return np.repeat(np.asarray(values, dtype=float)[:j - 1], grid.refine_factor)


def _check_step(grid, history, j):
    if not 1 <= j <= grid.coarse_n:
        raise DomainError(f'step index {j} outside 1..{grid.coarse_n}')
    if len(history) < j:
        raise DomainError(f'history holds {len(history)} values, step {j} needs {j}')


def stage_Y(problem, grid, noise, history, j, cache=None):
    '''Stage value Y_j at the randomized time t_{j-1} + tau_j * h

    History integrals use the exact ``dr`` differences and Riemann-Stieltjes
    ``dB`` differences; the local dB integral stops at the last fine node not
    after the randomized time.
    '''
    _check_step(grid, history, j)
    F = grid.refine_factor
    h = grid.h
    tau = tau_for_step(noise, grid.coarse_n, j)
    first = (j - 1) * F
    t_prev = noise.nodes[first]
    u = t_prev + tau * h
    window_end = noise.nodes[first + int(np.floor(tau * F))]
    x_prev = history[j - 1]

    if cache is not None and len(cache) >= j:
        drift = cache.drift_values(j)
        diffusion = cache.diffusion_values(j)
    else:
        past = np.asarray(history[:j], dtype=float)
        drift = np.asarray(problem.drift(past), dtype=float)
        diffusion = np.asarray(problem.diffusion(past), dtype=float)

    window = (0.0, t_prev)
    stage = x_prev
    stage += difference_kernel_sum(problem.alpha, u, t_prev, window, _history_cells(grid, drift, j), noise, DR)
    stage += difference_kernel_sum(problem.beta, u, t_prev, window, _history_cells(grid, diffusion, j), noise, DB)
    stage += local_singular_sum(problem.alpha, u, t_prev, drift[j - 1], noise, DR)
    stage += local_singular_sum(problem.beta, u, t_prev, diffusion[j - 1], noise, DB, window_end=window_end)
    return float(stage)


def inner_accumulation(problem, grid, noise, cache, j):
    '''A_j(s) for the fine left endpoints s of step j, independent of the outer index n'''
    F = grid.refine_factor
    first = (j - 1) * F
    t_prev = noise.nodes[first]
    s = noise.nodes[first:first + F]
    drift = cache.drift_values(j)
    diffusion = cache.diffusion_values(j)

    window = (0.0, t_prev)
    inner = difference_kernel_sum(problem.alpha, s, t_prev, window, _history_cells(grid, drift, j), noise, DR)
    inner = inner + local_singular_sum(problem.alpha, s, t_prev, drift[j - 1], noise, DR)
    inner = inner + difference_kernel_sum(problem.beta, s, t_prev, window, _history_cells(grid, diffusion, j), noise, DB)
    inner = inner + local_singular_sum(problem.beta, s, t_prev, diffusion[j - 1], noise, DB)
    return inner


def fill_stage(problem, grid, noise, history, cache, j, scheme_tag=RANDOMIZED_MILSTEIN):
    '''Record everything step j contributes once X_{j-1} is known'''
    _check_step(grid, history, j)
    x_prev = history[j - 1]
    cache.record_coefficients(
        j,
        problem.drift(x_prev),
        problem.diffusion(x_prev),
        problem.diffusion_derivative(x_prev),
    )
    if scheme_tag == CLASSICAL_EM:
        return
    stage = stage_Y(problem, grid, noise, history, j, cache=cache)
    cache.record_stage(j, stage, problem.drift(stage))
    if scheme_tag == RANDOMIZED_MILSTEIN:
        cache.record_inner(j, inner_accumulation(problem, grid, noise, cache, j))


def step_X(problem, grid, noise, history, cache, n, scheme_tag=RANDOMIZED_MILSTEIN):
    '''X_n from the full history and the cached stage quantities of steps 1..n'''
    _check_step(grid, history, n)
    F = grid.refine_factor
    h = grid.h
    t_n = noise.nodes[n * F]
    window = (0.0, t_n)

    if scheme_tag == CLASSICAL_EM:
        coarse = noise.nodes[0:n * F + 1:F]
        weights = integral_power_kernel(problem.alpha, t_n, coarse[:-1], coarse[1:])
        drift = np.sum(weights * cache.drift_values(n))
    else:
        taus = noise.taus(grid.coarse_n)[:n]
        steps_back = n - np.arange(1, n + 1)
        weights = h * power((steps_back + (1.0 - taus)) * h, -problem.alpha)
        drift = np.sum(weights * cache.stage_drift_values(n))

    diffusion = singular_ito_sum(problem.beta, t_n, window, np.repeat(cache.diffusion_values(n), F), noise)
    value = problem.x0 + drift + diffusion

    if scheme_tag == RANDOMIZED_MILSTEIN:
        integrand = np.repeat(cache.derivative_values(n), F) * cache.inner_values(n)
        value = value + singular_ito_sum(problem.beta, t_n, window, integrand, noise)
    return float(value)


def simulate(problem, grid, noise, scheme_tag=RANDOMIZED_MILSTEIN, cache=True):
    '''Run one scheme over the whole grid

    With ``cache=False`` the stage quantities of every step are recomputed for
    each n, which is only useful to check the cached engine.
    '''
    check_scheme(scheme_tag)
    if not noise.supports(grid):
        raise GridError(f'noise with {noise.fine_cells} fine cells does not match {grid!r}')
    if scheme_tag != CLASSICAL_EM:
        noise.taus(grid.coarse_n)

    history = [problem.x0]
    stages = StageCache()
    for n in range(1, grid.coarse_n + 1):
        if cache:
            fill_stage(problem, grid, noise, history, stages, n, scheme_tag)
        else:
            stages = StageCache()
            for j in range(1, n + 1):
                fill_stage(problem, grid, noise, history, stages, j, scheme_tag)
        history.append(step_X(problem, grid, noise, history, stages, n, scheme_tag))

    trajectory = Trajectory(grid, history, scheme_tag)
    if not np.all(np.isfinite(trajectory.values)):
        log.warning('trajectory is not finite', scheme=scheme_tag, coarse_n=grid.coarse_n)
    return trajectory
