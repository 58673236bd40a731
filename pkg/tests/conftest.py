import pytest

import dgl1d


@pytest.fixture(scope="session")
def constants():
    return dgl1d.universal_constants()


@pytest.fixture(scope="session")
def rec065():
    return dgl1d.zeta(0.65)


@pytest.fixture(scope="session")
def rec08():
    return dgl1d.zeta(0.8)


@pytest.fixture(scope="session")
def rec10():
    return dgl1d.zeta(1.0)
