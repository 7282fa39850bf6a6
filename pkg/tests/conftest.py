import pytest

from ringprob import builtin, default_catalog, direct_product, whole_ring


@pytest.fixture(scope="session")
def nc4a():
    return builtin("nc4a")


@pytest.fixture(scope="session")
def nc4axz2(nc4a):
    return direct_product(nc4a, builtin("zn", (2,)), name="nc4axz2")


@pytest.fixture(scope="session")
def catalog():
    # shared across the whole session so per-ring caches accumulate
    return default_catalog()


@pytest.fixture(scope="session")
def z4():
    return builtin("zn", (4,))
