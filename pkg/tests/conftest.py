import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from support import ACCEPTANCE_LINES  # noqa: E402


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES, key=lambda k: (int(str(k).rstrip('ab')), str(k))):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
