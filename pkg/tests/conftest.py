import pytest

from agorad.fixtures import fixture_domain


@pytest.fixture(scope="session")
def w():
    return fixture_domain("w")


@pytest.fixture(scope="session")
def example2():
    return fixture_domain("example2")


@pytest.fixture(scope="session")
def example3():
    return fixture_domain("example3")


@pytest.fixture(scope="session")
def wxw():
    return fixture_domain("wxw")


@pytest.fixture(scope="session")
def y_horn():
    return fixture_domain("y-horn")


@pytest.fixture(scope="session")
def z_affine():
    return fixture_domain("z-affine")


@pytest.fixture(scope="session")
def yz_product():
    return fixture_domain("yz-product")
