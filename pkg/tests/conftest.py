"""Shared fixtures. Acceptance results are echoed in the terminal summary."""
import time

import pytest

_ACCEPTANCE_LINES: list[str] = []


class Criterion:
    """Collects named checks for one acceptance criterion and reports them."""

    def __init__(self, number: int, title: str, budget_s: float):
        self.number = number
        self.title = title
        self.budget_s = budget_s
        self.failures: list[str] = []
        self.details: list[str] = []
        self._t0 = time.perf_counter()

    def check(self, ok: bool, what: str) -> None:
        (self.details if ok else self.failures).append(what)

    def finish(self) -> None:
        elapsed = time.perf_counter() - self._t0
        self.check(elapsed < self.budget_s, f"runtime {elapsed:.2f}s < {self.budget_s:g}s")
        status = "PASS" if not self.failures else "FAIL"
        line = f"[{status}] criterion {self.number:2d}: {self.title} ({elapsed:.2f}s)"
        if self.failures:
            line += " -- failed: " + "; ".join(self.failures)
        _ACCEPTANCE_LINES.append(line)
        print(line)
        assert not self.failures, line


@pytest.fixture
def criterion():
    made = []

    def make(number: int, title: str, budget_s: float) -> Criterion:
        c = Criterion(number, title, budget_s)
        made.append(c)
        return c

    return make


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE_LINES, key=lambda s: int(s.split("criterion")[1].split(":")[0])):
            terminalreporter.write_line(line)
