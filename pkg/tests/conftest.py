import pytest

from degcoh.spectrum import build_box2d, build_ho2d, build_ho3d, build_nondegenerate_ho, get_system
from degcoh.state import TruncationPolicy

#: enough levels for every converged state up to z = 20 in the ho systems
LEVELS = 1025
WIDE = TruncationPolicy(max_levels=1024)
FINITE = TruncationPolicy(finite_system=True)


@pytest.fixture(scope="session")
def box2d():
    return build_box2d(LEVELS)


@pytest.fixture(scope="session")
def box2d_23():
    return get_system("box2d-23")


@pytest.fixture(scope="session")
def ho2d():
    return build_ho2d(LEVELS)


@pytest.fixture(scope="session")
def ho3d():
    return build_ho3d(LEVELS)


@pytest.fixture(scope="session")
def glauber():
    return build_nondegenerate_ho(LEVELS)


@pytest.fixture(scope="session", params=["box2d", "ho2d", "ho3d", "glauber"])
def system(request):
    return request.getfixturevalue(request.param)


#: lines recorded by the acceptance tests, echoed after the run
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
