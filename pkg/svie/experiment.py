'''Strong L2 errors by coupled-path Monte Carlo and empirical convergence rates

Every path draws one FineNoise at the reference resolution. The reference
solution (randomized Milstein on the finest grid) and each coarse solution
run on that same Brownian path, so their difference measures discretization
error. Paths are independent work units; the reduction runs in path-index
order, so the tables do not depend on how many workers produced them.
'''
import csv
from collections import namedtuple
from concurrent.futures import ProcessPoolExecutor

import daiquiri
import numpy as np
from tqdm import tqdm

from .exceptions import DomainError, GridError, RegressionError
from .randomness import GridSpec, generate_fine_noise
from .scheme import RANDOMIZED_MILSTEIN, check_scheme, simulate
from . import utils

log = daiquiri.getLogger(__name__)

TERMINAL = 'terminal'
MAX_OVER_NODES = 'max'
METRICS = (TERMINAL, MAX_OVER_NODES)

# fine cells per reference step; 1 would make the reference correction vanish
REFERENCE_REFINE = 2

CSV_HEADER = ('N', 'h', 'l2_error', 'std_error', 'paths')

ErrorRow = namedtuple('ErrorRow', ['coarse_n', 'h', 'l2_error', 'std_error', 'paths'])


class ErrorTable(object):
    '''Strong errors per step size, rows sorted by descending h'''

    def __init__(self, rows, scheme_tag=RANDOMIZED_MILSTEIN):
        rows = [ErrorRow(int(r[0]), float(r[1]), float(r[2]), float(r[3]), int(r[4])) for r in rows]
        for row in rows:
            if row.l2_error < 0.0 or row.std_error < 0.0:
                raise DomainError(f'negative error in row for N={row.coarse_n}')
        self.rows = sorted(rows, key=lambda row: -row.h)
        self.scheme_tag = scheme_tag

    def __iter__(self):
        return iter(self.rows)

    def __len__(self):
        return len(self.rows)

    def __eq__(self, other):
        if not isinstance(other, ErrorTable):
            return NotImplemented
        return self.rows == other.rows

    @property
    def step_sizes(self):
        return np.array([row.h for row in self.rows])

    @property
    def errors(self):
        return np.array([row.l2_error for row in self.rows])

    def row(self, coarse_n):
        for row in self.rows:
            if row.coarse_n == coarse_n:
                return row
        raise KeyError(coarse_n)

    def to_csv(self, path):
        fmt = utils.format_decimal
        utils.write_csv(path, CSV_HEADER, (
            (str(r.coarse_n), fmt(r.h), fmt(r.l2_error), fmt(r.std_error), str(r.paths)) for r in self.rows))

    @classmethod
    def from_csv(cls, path, scheme_tag=RANDOMIZED_MILSTEIN):
        with open(path, newline='') as handle:
            reader = csv.reader(handle)
            header = next(reader, None)
            if header is None or tuple(h.strip() for h in header) != CSV_HEADER:
                raise DomainError(f'{path}: expected header {",".join(CSV_HEADER)}')
            rows = [row for row in reader if row]
        try:
            return cls(rows, scheme_tag=scheme_tag)
        except (IndexError, ValueError) as error:
            raise DomainError(f'{path}: malformed error row ({error})') from None

    def __repr__(self):
        return f'ErrorTable(scheme={self.scheme_tag!r}, levels={[r.coarse_n for r in self.rows]})'


class RateEstimate(object):
    '''Least-squares slope of log2(error) against log2(h)'''

    def __init__(self, slope, intercept, r_squared, theoretical, holder=None):
        self.slope = float(slope)
        self.intercept = float(intercept)
        self.r_squared = float(r_squared)
        self.theoretical = float(theoretical)
        self.holder = holder

    def as_dict(self):
        return {
            'slope': self.slope,
            'intercept': self.intercept,
            'r_squared': self.r_squared,
            'theoretical': self.theoretical,
            'holder': self.holder,
        }

    def __repr__(self):
        return f'RateEstimate(slope={self.slope:.4f}, theoretical={self.theoretical:.4f}, r_squared={self.r_squared:.4f})'


def holder_exponent(alpha, beta):
    '''Temporal Hoelder exponent of the exact solution, min{1/2 - beta, 1 - alpha}'''
    return min(0.5 - float(beta), 1.0 - float(alpha))


def theoretical_rate(alpha, beta):
    '''Strong convergence rate of the randomized Milstein scheme, min{1 - 2beta, 1 - alpha}'''
    return min(1.0 - 2.0 * float(beta), 1.0 - float(alpha))


def _check_levels(levels, ref_n):
    levels = sorted(set(int(level) for level in levels))
    if not levels:
        raise GridError('no levels given')
    for level in levels:
        if level < 1 or ref_n % level:
            raise GridError(f'level {level} does not divide the reference level {ref_n}')
    return levels


def path_squared_errors(problem, levels, ref_n, seed, path_index, schemes=(RANDOMIZED_MILSTEIN,), metric=TERMINAL,
                        ref_refine=REFERENCE_REFINE):
    '''Squared errors of one path, shape (len(schemes), len(levels))

    The reference runs with ``ref_refine`` fine cells per step, so its
    inner accumulations are taken inside each step and the correction term
    is not identically zero. Every level shares the same fine grid.
    '''
    if int(ref_refine) < 2:
        raise DomainError(f'the reference needs at least 2 fine cells per step, got {ref_refine}')
    fine_cells = ref_n * ref_refine
    ref_grid = GridSpec(problem.horizon, ref_n, ref_refine)
    noise = generate_fine_noise(seed, path_index, ref_grid, list(levels) + [ref_n])
    reference = simulate(problem, ref_grid, noise, RANDOMIZED_MILSTEIN)

    errors = np.empty((len(schemes), len(levels)))
    for i, scheme_tag in enumerate(schemes):
        for k, level in enumerate(levels):
            if level == ref_n and scheme_tag == RANDOMIZED_MILSTEIN:
                coarse = reference
            else:
                coarse = simulate(problem, GridSpec(problem.horizon, level, fine_cells // level), noise, scheme_tag)
            if metric == TERMINAL:
                errors[i, k] = (coarse.terminal - reference.terminal) ** 2
            else:
                errors[i, k] = np.max((coarse.values - reference.values[::ref_n // level]) ** 2)
    return errors


def _path_job(job):
    return path_squared_errors(*job)


def _table(squared, levels, horizon, scheme_tag):
    paths = squared.shape[0]
    rows = []
    for k, level in enumerate(levels):
        column = squared[:, k]
        mean = np.mean(column)
        l2_error = np.sqrt(mean)
        # delta method: se(sqrt(m)) = se(m) / (2 sqrt(m))
        std_error = np.sqrt(np.var(column, ddof=1) / paths) / (2.0 * l2_error) if l2_error > 0.0 else 0.0
        rows.append((level, horizon / level, l2_error, std_error, paths))
    return ErrorTable(rows, scheme_tag=scheme_tag)


def strong_errors(problem, levels, ref_n, paths, seed, schemes=(RANDOMIZED_MILSTEIN,), workers=1,
                  metric=TERMINAL, progress=False, ref_refine=REFERENCE_REFINE):
    '''One ErrorTable per scheme, all measured against the same reference paths'''
    ref_n = int(ref_n)
    levels = _check_levels(levels, ref_n)
    schemes = tuple(check_scheme(scheme_tag) for scheme_tag in schemes)
    if int(paths) < 2:
        raise DomainError(f'at least two paths are needed, got {paths}')
    if metric not in METRICS:
        raise DomainError(f'metric must be one of {METRICS}, got {metric!r}')

    jobs = [(problem, levels, ref_n, seed, p, schemes, metric, int(ref_refine)) for p in range(int(paths))]
    log.info('strong error study', problem=problem.name, levels=levels, ref=ref_n, ref_refine=ref_refine,
             paths=len(jobs), schemes=list(schemes), workers=workers)

    bar = tqdm(total=len(jobs), desc='paths', disable=not progress)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = []
            for result in pool.map(_path_job, jobs, chunksize=max(1, len(jobs) // (4 * workers))):
                results.append(result)
                bar.update()
    else:
        results = []
        for job in jobs:
            results.append(_path_job(job))
            bar.update()
    bar.close()

    squared = np.stack(results)
    tables = {}
    for i, scheme_tag in enumerate(schemes):
        tables[scheme_tag] = _table(squared[:, i, :], levels, problem.horizon, scheme_tag)
        for row in tables[scheme_tag]:
            log.debug('strong error', scheme=scheme_tag, coarse_n=row.coarse_n, l2_error=row.l2_error,
                      std_error=row.std_error)
    return tables


def strong_error(problem, levels, ref_n, paths, seed, scheme_tag=RANDOMIZED_MILSTEIN, **kwargs):
    '''L2 strong error at T of one scheme for every level dividing ``ref_n``'''
    return strong_errors(problem, levels, ref_n, paths, seed, schemes=(scheme_tag,), **kwargs)[scheme_tag]


def estimate_rate(table, alpha, beta):
    '''Fit log2(l2_error) = slope * log2(h) + intercept over the positive rows'''
    usable = [row for row in table if row.l2_error > 0.0]
    for row in table:
        if row.l2_error <= 0.0:
            log.warning('zero error row excluded from rate fit', coarse_n=row.coarse_n)
    if len(usable) < 2:
        raise RegressionError(f'{len(usable)} usable rows, a rate fit needs at least 2')

    x = np.log2([row.h for row in usable])
    y = np.log2([row.l2_error for row in usable])
    slope, intercept = np.polyfit(x, y, 1)
    residual = y - (slope * x + intercept)
    total = np.sum((y - np.mean(y)) ** 2)
    r_squared = 1.0 - np.sum(residual ** 2) / total if total > 0.0 else 1.0
    return RateEstimate(slope, intercept, r_squared, theoretical_rate(alpha, beta),
                        holder=holder_exponent(alpha, beta))
