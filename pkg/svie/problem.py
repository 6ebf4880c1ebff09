'''Stochastic Volterra integral equations with weakly singular power kernels

    X(t) = x0 + int_0^t (t-s)^(-alpha) b(X(s)) ds + int_0^t (t-s)^(-beta) sigma(X(s)) dB_s

Coefficients are plain vectorized callables (numpy in, numpy out). Builtin
instances use module-level functions so problems can be sent to worker
processes.
'''
from collections import namedtuple

import daiquiri
import numpy as np

from .exceptions import ConfigError, InvalidExponentError
from .kernel import KernelExponent

log = daiquiri.getLogger(__name__)

CHECK_RANGE = (-10.0, 10.0)
CHECK_PAIRS = 1000
CHECK_SEED = 20240101
FINITE_DIFFERENCE_STEP = 1e-5
DERIVATIVE_TOLERANCE = 1e-6

DEFAULT_X0 = 1.0
DEFAULT_HORIZON = 1.0


def _check_exponent(name, value):
    value = float(value)
    if not 0.0 < value < 0.5:
        raise InvalidExponentError(f'{name} must lie in (0, 0.5)')
    return KernelExponent(value)


class SvieProblem(object):
    '''An SVIE instance: coefficients, sigma', initial value, horizon and exponents'''

    def __init__(self, x0, horizon, alpha, beta, drift, diffusion, diffusion_derivative, name='custom'):
        self._alpha = _check_exponent('alpha', alpha)
        self._beta = _check_exponent('beta', beta)
        self._x0 = float(x0)
        self._horizon = float(horizon)
        if not np.isfinite(self._x0):
            raise ValueError('x0 must be finite')
        if not self._horizon > 0.0:
            raise ValueError('horizon must be positive')
        self._drift = drift
        self._diffusion = diffusion
        self._diffusion_derivative = diffusion_derivative
        self._name = name

    @property
    def x0(self):
        return self._x0

    @property
    def horizon(self):
        return self._horizon

    @property
    def alpha(self):
        return self._alpha

    @property
    def beta(self):
        return self._beta

    @property
    def drift(self):
        return self._drift

    @property
    def diffusion(self):
        return self._diffusion

    @property
    def diffusion_derivative(self):
        return self._diffusion_derivative

    @property
    def name(self):
        return self._name

    def with_exponents(self, alpha, beta):
        return SvieProblem(self._x0, self._horizon, alpha, beta, self._drift, self._diffusion,
                           self._diffusion_derivative, name=self._name)

    def __repr__(self):
        return (f'SvieProblem(name={self._name!r}, x0={self._x0!r}, horizon={self._horizon!r}, '
                f'alpha={float(self._alpha)!r}, beta={float(self._beta)!r})')


# Coefficients of the builtin instances

def abs_sin(x):
    return np.abs(np.sin(x))


def cos(x):
    return np.cos(x)


def neg_sin(x):
    return -np.sin(x)


def zero(x):
    return np.zeros(np.shape(x))


def one(x):
    return np.ones(np.shape(x))


def builtin_benchmark(alpha=0.3, beta=0.1, x0=DEFAULT_X0):
    '''b(x) = |sin x|, sigma(x) = cos x, T = 1

    b is Lipschitz but not differentiable at multiples of pi.
    '''
    return SvieProblem(x0, DEFAULT_HORIZON, alpha, beta, abs_sin, cos, neg_sin, name='paper-sin-cos')


def zero_problem(alpha=0.3, beta=0.1, x0=DEFAULT_X0):
    return SvieProblem(x0, DEFAULT_HORIZON, alpha, beta, zero, zero, zero, name='zero')


def unit_drift_problem(alpha=0.3, beta=0.1, x0=DEFAULT_X0):
    '''b = 1, sigma = 0; exact solution x0 + t^(1-alpha) / (1-alpha)'''
    return SvieProblem(x0, DEFAULT_HORIZON, alpha, beta, one, zero, zero, name='unit-drift')


def additive_noise_problem(alpha=0.3, beta=0.1, x0=DEFAULT_X0):
    '''b(x) = |sin x|, sigma = 1, so the Milstein correction vanishes'''
    return SvieProblem(x0, DEFAULT_HORIZON, alpha, beta, abs_sin, one, zero, name='additive-noise')


BUILTIN_PROBLEMS = {
    'paper-sin-cos': builtin_benchmark,
    'zero': zero_problem,
    'unit-drift': unit_drift_problem,
    'additive-noise': additive_noise_problem,
}


def get_problem(name, alpha, beta, x0=DEFAULT_X0):
    try:
        factory = BUILTIN_PROBLEMS[name]
    except KeyError:
        known = ', '.join(sorted(BUILTIN_PROBLEMS))
        raise ConfigError(f'unknown problem {name!r} (known: {known})', key='problem') from None
    return factory(alpha=alpha, beta=beta, x0=x0)


# Assumption checks

CheckResult = namedtuple('CheckResult', ['name', 'passed', 'worst', 'witness'])


class ValidationReport(object):
    '''Outcome of :func:`validate`, one :class:`CheckResult` per assumption'''

    def __init__(self, problem, checks):
        self.problem = problem
        self.checks = list(checks)

    @property
    def passed(self):
        return all(check.passed for check in self.checks)

    def __getitem__(self, name):
        for check in self.checks:
            if check.name == name:
                return check
        raise KeyError(name)

    def lines(self):
        for check in self.checks:
            status = 'pass' if check.passed else 'FAIL'
            line = f'{check.name}: {status} (worst {check.worst:.6g})'
            if check.witness is not None:
                line += ' witness ' + ', '.join(f'{v:.6g}' for v in check.witness)
            yield line


def check_pairs(pairs=CHECK_PAIRS, check_range=CHECK_RANGE, seed=CHECK_SEED):
    '''Fixed set of point pairs (x, y), x != y'''
    rng = np.random.default_rng(seed)
    x = rng.uniform(*check_range, size=pairs)
    y = rng.uniform(*check_range, size=pairs)
    keep = x != y
    return x[keep], y[keep]


def _lipschitz_check(name, f, x, y, constant):
    slopes = np.abs(np.asarray(f(x), dtype=float) - np.asarray(f(y), dtype=float)) / np.abs(x - y)
    return _bound_check(name, slopes, constant, lambda k: (x[k], y[k]))


def _bound_check(name, values, bound, witness_of):
    values = np.where(np.isfinite(values), values, np.inf)
    worst = int(np.argmax(values))
    passed = bool(values[worst] <= bound)
    return CheckResult(name, passed, float(values[worst]), None if passed else witness_of(worst))


def validate(problem, lipschitz=1.0 + 1e-9, derivative_bound=1.0 + 1e-9, pairs=CHECK_PAIRS,
             check_range=CHECK_RANGE, seed=CHECK_SEED):
    '''Finite-sample check of the Lipschitz and C^2 assumptions on the coefficients

    Failures are reported with the witnessing point (pair), never raised.
    '''
    x, y = check_pairs(pairs, check_range, seed)
    b, sigma, dsigma = problem.drift, problem.diffusion, problem.diffusion_derivative

    step = FINITE_DIFFERENCE_STEP
    finite_difference = (np.asarray(sigma(x + step), dtype=float) - np.asarray(sigma(x - step), dtype=float)) / (2 * step)
    mismatch = np.abs(np.asarray(dsigma(x), dtype=float) - finite_difference)

    checks = [
        _lipschitz_check('drift-lipschitz', b, x, y, lipschitz),
        _lipschitz_check('diffusion-lipschitz', sigma, x, y, lipschitz),
        _bound_check('derivative-bounded', np.abs(np.asarray(dsigma(x), dtype=float)), derivative_bound,
                     lambda k: (x[k],)),
        _lipschitz_check('derivative-lipschitz', dsigma, x, y, derivative_bound),
        _bound_check('derivative-consistent', mismatch, DERIVATIVE_TOLERANCE, lambda k: (x[k],)),
    ]
    report = ValidationReport(problem, checks)
    for check in checks:
        if not check.passed:
            log.warning('assumption check failed', problem=problem.name, check=check.name,
                        worst=check.worst, witness=check.witness)
    return report
