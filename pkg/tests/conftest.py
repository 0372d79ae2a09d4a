import functools

import pytest

from szego.highprec import polynomial_zeros_mp
from szego.zeros import oracle_zeros


@functools.lru_cache(maxsize=None)
def _oracle(n):
    return tuple(oracle_zeros(n))


@functools.lru_cache(maxsize=None)
def _mp_roots(n):
    return tuple(polynomial_zeros_mp(n))


@pytest.fixture(scope="session")
def oracle():
    """Cached ``oracle_zeros``; call as ``oracle(n)``."""
    return _oracle


@pytest.fixture(scope="session")
def mp_roots():
    """Cached extended-precision roots; call as ``mp_roots(n)``."""
    return _mp_roots
