import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "qcanon",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
    derandomize=True,
)
settings.load_profile("qcanon")

from qcanon.rootdata import cartan_type


@pytest.fixture(scope="session")
def A1():
    return cartan_type("A1")


@pytest.fixture(scope="session")
def A2():
    return cartan_type("A2")


@pytest.fixture(scope="session")
def B2():
    return cartan_type("B2")


@pytest.fixture(scope="session")
def G2():
    return cartan_type("G2")
