import pytest

from symspread.field_tower import create_tower


@pytest.fixture(scope="session")
def t123():
    """F2 < F4 < F64."""
    return create_tower(2, [1, 2, 3])


@pytest.fixture(scope="session")
def f2(t123):
    return t123[0]


@pytest.fixture(scope="session")
def f4(t123):
    return t123[1]


@pytest.fixture(scope="session")
def f64(t123):
    return t123[2]


@pytest.fixture(scope="session")
def f3():
    return create_tower(3, [1])[0]
