import functools

import pytest

from parasuper.contraction import build_context


@functools.lru_cache(maxsize=None)
def context(series, n, partition=None, p=3):
    return build_context((series, n), partition, p)


@pytest.fixture(scope="session")
def ctx_of():
    return context


@pytest.fixture(scope="session")
def a2():
    return context("A", 2)


@pytest.fixture(scope="session")
def c2():
    return context("C", 2)


@pytest.fixture(scope="session")
def b2():
    return context("B", 2)
