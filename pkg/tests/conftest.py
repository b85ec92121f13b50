import pytest
from hypothesis import settings

from fractal_complexity.presets import CATALOG

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

# filled by tests/test_acceptance.py, one line per criterion
ACCEPTANCE_LINES: dict[int, str] = {}


@pytest.fixture(params=sorted(CATALOG))
def preset(request):
    return CATALOG[request.param]


@pytest.fixture
def sg3():
    return CATALOG["sg3"]


@pytest.fixture
def tree3():
    return CATALOG["tree3"]


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])
