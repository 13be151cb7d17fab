import functools

import numpy as np
import pytest

from confgauss.grid import fundamental_data
from confgauss.zoo import make_surface, sample


@functools.lru_cache(maxsize=64)
def _cached_data(name, n, param_items, domain):
    spec = make_surface(name, **dict(param_items))
    grid = sample(spec, n, domain=domain)
    return fundamental_data(grid)


def data_for(name, n=128, domain=None, **params):
    """Sampled fundamental data, cached across tests."""
    key_domain = None
    if domain is not None:
        key_domain = (tuple(domain[0]), tuple(domain[1]))
    return _cached_data(name, n, tuple(sorted(params.items())), key_domain)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
