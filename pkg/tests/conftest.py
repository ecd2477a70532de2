import pytest

from polarcl.geometry import load_space


@pytest.fixture(scope="session")
def w32():
    return load_space("W:3:2")


@pytest.fixture(scope="session")
def w52():
    return load_space("W:5:2")


@pytest.fixture(scope="session")
def q62():
    return load_space("Q:6:2")


@pytest.fixture(scope="session")
def qp52():
    return load_space("Q+:5:2")


@pytest.fixture(scope="session")
def qm52():
    return load_space("Q-:5:2")


@pytest.fixture(scope="session")
def qp72():
    return load_space("Q+:7:2")
