import time

import pytest

_criteria: dict[int, tuple[str, str, float]] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    number = item.get_closest_marker("criterion")
    if number is None or report.when != "call" and not (report.when == "setup" and report.failed):
        return
    n, title = number.args
    _criteria[n] = (title, "PASS" if report.passed else "FAIL", report.duration)


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        title, verdict, seconds = _criteria[n]
        terminalreporter.write_line(f"criterion {n:>2} {verdict}  {title}  ({seconds:.1f}s)")


class Budget:
    """Context manager asserting a wall-clock budget."""

    def __init__(self, seconds: float):
        self.seconds = seconds

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start
        if exc[0] is None:
            assert self.elapsed < self.seconds, f"took {self.elapsed:.1f}s, budget {self.seconds}s"
        return False


@pytest.fixture
def budget():
    return Budget
