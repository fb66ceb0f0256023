import sys

import numpy as np
import pytest

from cqhm.eigensystem import FamilyParams
from cqhm.invariance import catalog

H1 = FamilyParams(1, 0, 0)
H2 = FamilyParams(1, 0.5j, 0.125)
H3 = FamilyParams(1, -0.5 + 0.5j, 0.25j)
H4 = FamilyParams(1j, 0, 0)
H5 = FamilyParams(1j, 0.5j, 0.5)
H6 = FamilyParams(2, 2, 0.5)


@pytest.fixture
def rng():
    return np.random.default_rng(20240517)


@pytest.fixture(params=[e.name for e in catalog()])
def entry(request):
    return next(e for e in catalog() if e.name == request.param)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[k])
