'''Random inputs of a path: a fine Brownian path and the per-step uniform draws

The Brownian increments and the tau draws come from independent streams. A
stream is a Philox (counter-based) generator keyed by
(master seed, path index, stream tag[, level]), so the content of a path never
depends on the order in which paths are generated.
'''
import daiquiri
import numpy as np

from .exceptions import DomainError, GridError, NoiseError

log = daiquiri.getLogger(__name__)

BROWNIAN_STREAM = 0
TAU_STREAM = 1

MAX_SEED = 2 ** 64 - 1


class GridSpec(object):
    '''Uniform partition t_n = n*h of [0, T] with a fine sub-grid

    Each coarse cell holds ``refine_factor`` fine cells. Fine node times are
    always computed as m * fine_step with fine_step = T / (coarse_n * refine_factor),
    so two grids sharing the same fine resolution share node times exactly.
    '''

    def __init__(self, horizon, coarse_n, refine_factor=1):
        horizon = float(horizon)
        coarse_n = int(coarse_n)
        refine_factor = int(refine_factor)
        if not horizon > 0.0:
            raise GridError(f'horizon must be positive, got {horizon!r}')
        if coarse_n < 1:
            raise GridError(f'coarse step count must be >= 1, got {coarse_n}')
        if refine_factor < 1:
            raise GridError(f'refine factor must be >= 1, got {refine_factor}')
        self._horizon = horizon
        self._coarse_n = coarse_n
        self._refine_factor = refine_factor

    @property
    def horizon(self):
        return self._horizon

    @property
    def coarse_n(self):
        return self._coarse_n

    @property
    def refine_factor(self):
        return self._refine_factor

    @property
    def fine_cells(self):
        return self._coarse_n * self._refine_factor

    @property
    def h(self):
        return self._horizon / self._coarse_n

    @property
    def fine_step(self):
        return self._horizon / self.fine_cells

    def node(self, n):
        '''Coarse node t_n'''
        return n * self._refine_factor * self.fine_step

    @property
    def nodes(self):
        return np.arange(self._coarse_n + 1) * self._refine_factor * self.fine_step

    def __eq__(self, other):
        if not isinstance(other, GridSpec):
            return NotImplemented
        return (self._horizon, self._coarse_n, self._refine_factor) == (
            other._horizon, other._coarse_n, other._refine_factor)

    def __hash__(self):
        return hash((self._horizon, self._coarse_n, self._refine_factor))

    def __repr__(self):
        return f'GridSpec(horizon={self._horizon!r}, coarse_n={self._coarse_n}, refine_factor={self._refine_factor})'


def _frozen(values):
    array = np.array(values, dtype=float)
    array.setflags(write=False)
    return array


class FineNoise(object):
    '''One path of the product space: Brownian increments on the fine grid and
    the tau draws of every coarse level under study

    Immutable; arrays are returned read-only.
    '''

    def __init__(self, fine_increments, fine_step, taus_by_level=None):
        self._increments = _frozen(fine_increments)
        if self._increments.ndim != 1 or self._increments.size == 0:
            raise GridError('fine increments must be a non-empty 1-d sequence')
        self._fine_step = float(fine_step)
        if not self._fine_step > 0.0:
            raise GridError(f'fine step must be positive, got {fine_step!r}')
        self._taus = {}
        for level, taus in (taus_by_level or {}).items():
            taus = _frozen(taus)
            if np.any(taus <= 0.0) or np.any(taus >= 1.0):
                raise DomainError(f'tau draws of level {level} must lie in (0, 1)')
            self._taus[int(level)] = taus
        self._nodes = _frozen(np.arange(self._increments.size + 1) * self._fine_step)

    @property
    def fine_increments(self):
        return self._increments

    @property
    def fine_step(self):
        return self._fine_step

    @property
    def fine_cells(self):
        return self._increments.size

    @property
    def horizon(self):
        return self._nodes[-1]

    @property
    def nodes(self):
        '''Fine node times m * fine_step, m = 0..fine_cells'''
        return self._nodes

    @property
    def levels(self):
        return tuple(sorted(self._taus))

    @property
    def taus_by_level(self):
        return dict(self._taus)

    def taus(self, level):
        try:
            return self._taus[int(level)]
        except KeyError:
            raise NoiseError(f'no tau draws for level {level}') from None

    def brownian_path(self):
        '''B at the fine nodes, B_0 = 0'''
        return np.concatenate(([0.0], np.cumsum(self._increments)))

    def coarsened(self, factor):
        '''Same path on a grid ``factor`` times coarser; tau draws are kept'''
        return FineNoise(
            coarsen_increments(self._increments, factor),
            self._fine_step * int(factor),
            self._taus,
        )

    def supports(self, grid):
        return grid.fine_cells == self.fine_cells and np.isclose(grid.fine_step, self._fine_step, rtol=1e-12, atol=0.0)

    def __repr__(self):
        return f'FineNoise(fine_cells={self.fine_cells}, fine_step={self._fine_step!r}, levels={self.levels})'


def stream(master_seed, path_index, tag, *extra):
    '''Philox generator keyed by (master_seed, path_index, tag, *extra)'''
    master_seed = int(master_seed)
    path_index = int(path_index)
    if not 0 <= master_seed <= MAX_SEED:
        raise DomainError(f'master seed must be an unsigned 64-bit integer, got {master_seed}')
    if path_index < 0:
        raise DomainError(f'path index must be >= 0, got {path_index}')
    entropy = [master_seed, path_index, int(tag)] + [int(e) for e in extra]
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(entropy)))


def uniform_open(rng, size):
    '''U(0, 1) draws on the open interval; an exact 0 becomes the smallest positive double'''
    draws = rng.random(size)
    return np.where(draws == 0.0, np.nextafter(0.0, 1.0), draws)


def generate_fine_noise(master_seed, path_index, grid, levels):
    '''Draw the FineNoise of one path at the fine resolution of ``grid``

    Brownian increments ~ N(0, fine_step); for every coarse level L in
    ``levels`` L independent tau draws from that level's own stream.
    '''
    levels = sorted(set(int(level) for level in levels))
    if not levels:
        raise GridError('at least one coarse level is needed for the tau draws')
    if levels[0] < 1:
        raise GridError(f'coarse levels must be >= 1, got {levels[0]}')

    rng = stream(master_seed, path_index, BROWNIAN_STREAM)
    increments = rng.standard_normal(grid.fine_cells) * np.sqrt(grid.fine_step)

    taus = {}
    for level in levels:
        taus[level] = uniform_open(stream(master_seed, path_index, TAU_STREAM, level), level)

    log.debug('fine noise generated', path=path_index, fine_cells=grid.fine_cells, levels=levels)
    return FineNoise(increments, grid.fine_step, taus)


def coarsen_increments(fine, factor):
    '''Sum consecutive blocks of ``factor`` increments, left to right'''
    fine = np.asarray(fine, dtype=float)
    factor = int(factor)
    if factor < 1:
        raise GridError(f'coarsening factor must be >= 1, got {factor}')
    if fine.size % factor:
        raise GridError(f'{fine.size} increments cannot be coarsened by a factor {factor}')
    blocks = fine.reshape(-1, factor)
    coarse = blocks[:, 0].copy()
    for column in range(1, factor):
        coarse += blocks[:, column]
    return coarse


def tau_for_step(noise, level, j):
    '''tau_j of coarse level ``level``, j = 1..level'''
    taus = noise.taus(level)
    j = int(j)
    if not 1 <= j <= taus.size:
        raise NoiseError(f'step index {j} outside 1..{taus.size} for level {level}')
    return float(taus[j - 1])
