import os

import numpy as np
import pytest

from svie.problem import SvieProblem, builtin_benchmark, zero, one


def pytest_collection_modifyitems(config, items):
    if not os.getenv('SVIE_FAST'):
        return
    skip_slow = pytest.mark.skip(reason='SVIE_FAST is set')
    for item in items:
        if 'slow' in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def sin_cos():
    return builtin_benchmark(alpha=0.3, beta=0.1)


@pytest.fixture
def rough_sin_cos():
    return builtin_benchmark(alpha=0.2, beta=0.3)


@pytest.fixture
def quiet_problem():
    '''b = sigma = 0'''
    return SvieProblem(0.7, 1.0, 0.3, 0.1, zero, zero, zero, name='quiet')


@pytest.fixture
def constant_diffusion():
    '''Non-trivial drift, sigma = 1 so sigma' = 0'''
    return SvieProblem(0.5, 1.0, 0.3, 0.2, lambda x: np.abs(np.sin(x)), one, zero, name='constant-diffusion')
