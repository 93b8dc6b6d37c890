import random

import pytest

from privlocker.groups import backend


@pytest.fixture(scope="session")
def toy():
    return backend("toy")


@pytest.fixture(scope="session")
def bn():
    return backend("bn256")


@pytest.fixture
def rng():
    return random.Random(0xC0FFEE)
