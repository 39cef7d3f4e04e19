import math

import pytest
from hypothesis import HealthCheck, settings

from ewldyn import ReservoirParams

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

LN4 = math.log(4.0)


@pytest.fixture(scope="session")
def strong():
    """Omega = 5 Gamma, the regime used for all phenomenology checks."""
    return ReservoirParams.strong_coupling()


@pytest.fixture(scope="session")
def unit():
    return ReservoirParams(1.0, 1.0)


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for key in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[key])
