import pytest

import config
from census import census_classify, census_determinants, enumerate_natural
from utils import read_matrices, read_named_perms, read_square


def load_square(name):
    return read_square(config.FIXTURES_DIR / f"{name}.txt")


def load_matrices(name):
    return read_matrices(config.FIXTURES_DIR / f"{name}.txt")


@pytest.fixture
def durer():
    return load_square('durer')


@pytest.fixture(scope='session')
def named_perms():
    return read_named_perms(config.FIXTURES_DIR / 'permutations.txt')


@pytest.fixture(scope='session')
def census4():
    """The order-4 census with labels and determinants filled in"""
    c = enumerate_natural(4)
    census_classify(c)
    census_determinants(c)
    return c


@pytest.fixture(scope='session')
def census3():
    return enumerate_natural(3, workers=1)
