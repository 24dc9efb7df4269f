import pytest

from symcrystal.cartan import parse_datum
from symcrystal.vtheta import VTheta, build_crystal


@pytest.fixture(scope="session")
def ainf1():
    return parse_datum("ainf", 1)


@pytest.fixture(scope="session")
def ainf3():
    return parse_datum("ainf", 3)


@pytest.fixture(scope="session")
def aff2():
    return parse_datum("aff:2")


@pytest.fixture(scope="session")
def crystal_ainf2():
    return build_crystal(parse_datum("ainf", 2), 2)


@pytest.fixture(scope="session")
def crystal_aff2():
    return build_crystal(parse_datum("aff:2"), 2)


@pytest.fixture(scope="session")
def vt_ainf2():
    return VTheta(parse_datum("ainf", 2))
