import pytest
from hypothesis import settings

from vassiliev import bundled_knot_table, parse_gauss_code

settings.register_profile("suite", deadline=None, max_examples=60)
settings.load_profile("suite")

TREFOIL = "O1+ U2+ O3+ U1+ O2+ U3+"


@pytest.fixture(scope="session")
def corpus():
    return bundled_knot_table()


@pytest.fixture
def trefoil():
    return parse_gauss_code(TREFOIL)
