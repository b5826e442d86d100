import numpy as np
import pytest

from ofdmcp import OfdmGrid

from .helpers import GRIDS


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture(params=GRIDS, ids=lambda g: f"N{g[0]}-CP{g[1]}")
def grid(request):
    return OfdmGrid(*request.param)


def pytest_terminal_summary(terminalreporter):
    from .test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(RESULTS):
            terminalreporter.write_line(line)
