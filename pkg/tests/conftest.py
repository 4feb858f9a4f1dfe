import pytest

from volterra_colloc import example1, example2, reduce


@pytest.fixture(scope="session")
def ex1():
    return example1()


@pytest.fixture(scope="session")
def ex2():
    return example2()


@pytest.fixture(scope="session")
def red1(ex1):
    return reduce(ex1)


@pytest.fixture(scope="session")
def red2(ex2):
    return reduce(ex2)
