import os

import hypothesis
import pytest

from fi_koszul.exactla import RATIONALS, prime_field
from fi_koszul.ficore import Representation, atom_module, free_module, truncate_above

hypothesis.settings.register_profile("fast", max_examples=10, deadline=None)
hypothesis.settings.register_profile("thorough", max_examples=200, deadline=None)
hypothesis.settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "fast"))

FIXTURES = os.path.join(os.path.dirname(__file__), "fixtures")


@pytest.fixture(params=[RATIONALS, prime_field(2)], ids=["Q", "F2"])
def field(request):
    return request.param


@pytest.fixture
def M1():
    return free_module(1, 3)


@pytest.fixture
def M2():
    return free_module(2, 4)


@pytest.fixture
def atom_trivial_1():
    return atom_module(1, Representation.TRIVIAL, 5)


@pytest.fixture
def constant_q1():
    return truncate_above(free_module(0, 5), 1)


@pytest.fixture
def fixture_path():
    def path(name):
        return os.path.join(FIXTURES, name)

    return path
