import pytest


def pytest_configure(config):
    config._acceptance_lines = {}


@pytest.fixture
def criterion(request):
    """Record a one-line verdict for an acceptance criterion.

    Usage: ``with criterion(3, "description") as rec: ...; rec.detail = "..."``.
    The line reads FAIL if the block raises.
    """
    lines = request.config._acceptance_lines

    class _Recorder:
        def __init__(self, num, title):
            self.num, self.title, self.detail = num, title, ""

        def __enter__(self):
            return self

        def __exit__(self, exc_type, exc, tb):
            status = "PASS" if exc_type is None else "FAIL"
            extra = self.detail if exc_type is None else f"{exc_type.__name__}: {exc}"
            lines[self.num] = f"criterion {self.num:>2} {status}  {self.title}  [{extra}]"
            return False

    return _Recorder


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config._acceptance_lines
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(lines):
        line = lines[num]
        terminalreporter.write_line(line)
