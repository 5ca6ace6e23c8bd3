import pytest

from powerful_ap import enumerate_powerful

import oracles


@pytest.fixture(scope="session")
def table_1e6():
    return enumerate_powerful(10**6)


@pytest.fixture(scope="session")
def table_1e8():
    return enumerate_powerful(10**8)


@pytest.fixture(scope="session")
def brute_1e6():
    return oracles.brute_powerful_upto(10**6)
