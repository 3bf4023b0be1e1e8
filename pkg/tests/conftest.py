import pytest

from charperm import build_context


@pytest.fixture(scope="session")
def gf4():
    return build_context(1, 2)


@pytest.fixture(scope="session")
def gf8():
    return build_context(1, 3)


@pytest.fixture(scope="session")
def gf16():
    return build_context(1, 4)


@pytest.fixture(scope="session")
def gf16_tower():
    # GF(16) as a degree-2 extension of GF(4)
    return build_context(2, 2)


@pytest.fixture(scope="session")
def gf64_tower():
    # GF(64) as a degree-3 extension of GF(4)
    return build_context(2, 3)
