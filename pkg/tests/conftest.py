from functools import lru_cache

import numpy as np
import pytest

from gspcensus import brute


@lru_cache(maxsize=None)
def coset(g, ell, gamma):
    """All elements of GSp^gamma_2g(F_l) as one (N, 2g, 2g) array."""
    return np.concatenate(list(brute.enumerate_coset_shards(g, ell, gamma)))


@lru_cache(maxsize=None)
def histogram(g, ell, gamma):
    return brute.delta_histogram(g, ell, gamma)


@pytest.fixture
def get_coset():
    return coset


@pytest.fixture
def get_histogram():
    return histogram
