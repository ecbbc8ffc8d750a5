import math
import sys

import numpy as np
import pytest
from hypothesis import settings

from revchain import kernel

settings.register_profile("ci", max_examples=50, deadline=None)
settings.register_profile("thorough", max_examples=500, deadline=None)
settings.load_profile("ci")

SQRT2 = math.sqrt(2.0)
# unit mean-zero direction for pi = (2/3, 1/3)
LAZY2_UNIT = np.array([1 / SQRT2, -SQRT2])


@pytest.fixture
def flip():
    return kernel.flip()


@pytest.fixture
def lazy2():
    return kernel.lazy2()


@pytest.fixture
def mh3():
    return kernel.mh3()


@pytest.fixture
def ident():
    return kernel.identity(3)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
