import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from birlinks.catalog import default_catalog  # noqa: E402

ACCEPTANCE_LINES: dict[int, str] = {}


@pytest.fixture(scope="session")
def catalog():
    return default_catalog()


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[n])
