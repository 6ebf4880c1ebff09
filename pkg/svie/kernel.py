'''Weakly singular power kernels (t - s)^(-gamma) and their closed-form integrals

Every power in the package goes through :func:`power`, so kernel values agree
bit for bit wherever they are computed.
'''
import numpy as np

from .exceptions import DomainError, InvalidExponentError


class KernelExponent(float):
    '''Kernel exponent gamma, strictly inside (0, 1)

    The drift and diffusion exponents of a problem are narrower, (0, 1/2); that
    is checked when the problem is built. Second moments need 2*beta, which is
    why the kernel itself accepts the whole unit interval.
    '''

    def __new__(cls, gamma):
        value = float(gamma)
        if not 0.0 < value < 1.0:
            raise InvalidExponentError(f'kernel exponent must lie in (0, 1), got {value!r}')
        return super().__new__(cls, value)


def power(lag, exponent):
    '''lag ** exponent computed as exp(exponent * log(lag))

    A zero lag gives 0 for positive exponents and inf for negative ones.
    '''
    lag = np.asarray(lag, dtype=float)
    with np.errstate(divide='ignore'):
        value = np.exp(exponent * np.log(lag))
    return value[()]


def eval_kernel(gamma, t, s):
    '''(t - s)^(-gamma) for s < t'''
    gamma = KernelExponent(gamma)
    lag = np.asarray(t, dtype=float) - np.asarray(s, dtype=float)
    if np.any(lag <= 0.0):
        raise DomainError('kernel needs s < t strictly')
    return power(lag, -gamma)


def integral_power_kernel(gamma, t_star, a, b):
    '''Exact value of the integral of (t_star - s)^(-gamma) over s in [a, b]

    ``a`` and ``b`` may be arrays (one interval per element); b == t_star is
    allowed because the singularity is integrable.
    '''
    gamma = KernelExponent(gamma)
    t_star = np.asarray(t_star, dtype=float)
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if np.any(a > b):
        raise DomainError('integration window is reversed (a > b)')
    if np.any(b > t_star):
        raise DomainError('integration window passes the singularity (b > t_star)')
    exponent = 1.0 - gamma
    return (power(t_star - a, exponent) - power(t_star - b, exponent)) / exponent


def _check_step_indices(n, j, h):
    n, j = int(n), int(j)
    if j < 1 or j > n:
        raise DomainError(f'step index must satisfy 1 <= j <= n, got j={j}, n={n}')
    if not h > 0.0:
        raise DomainError(f'step size must be positive, got {h!r}')
    return n, j


def expected_randomized_weight(alpha, n, j, h):
    '''E_tau of h * (t_n - (t_{j-1} + tau*h))^(-alpha) for tau ~ U(0, 1)

    Equals the exact kernel integral over [t_{j-1}, t_j]: the randomized
    node gives an unbiased quadrature of the kernel weight.
    '''
    alpha = KernelExponent(alpha)
    n, j = _check_step_indices(n, j, h)
    return integral_power_kernel(alpha, n * h, (j - 1) * h, j * h)


def expected_randomized_weight_sq(alpha, n, j, h):
    '''E_tau of |h * (t_n - (t_{j-1} + tau*h))^(-alpha)|^2 in closed form

    h^(2(1-alpha)) / (1-2alpha) * [(n+1-j)^(1-2alpha) - (n-j)^(1-2alpha)]
    '''
    alpha = KernelExponent(alpha)
    if not 2.0 * alpha < 1.0:
        raise InvalidExponentError(f'second moment needs 2*alpha < 1, got alpha={float(alpha)!r}')
    n, j = _check_step_indices(n, j, h)
    exponent = 1.0 - 2.0 * alpha
    bracket = power(n + 1 - j, exponent) - power(n - j, exponent)
    return power(h, 2.0 * (1.0 - alpha)) / exponent * bracket
