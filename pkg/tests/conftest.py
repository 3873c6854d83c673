import os
import sys
import time

import pytest

sys.path.insert(0, os.path.dirname(__file__))

RESULTS = []


class Criterion:
    """Collects the checks of one acceptance criterion and its wall time."""

    def __init__(self):
        self.number = None
        self.title = ""
        self.limit = None
        self.checks = []
        self.started = time.perf_counter()

    def start(self, number, title, limit_seconds):
        self.number, self.title, self.limit = number, title, limit_seconds
        self.started = time.perf_counter()

    def check(self, label, ok, detail=""):
        self.checks.append((label, bool(ok), detail))
        print(f"  [{'ok' if ok else 'FAIL'}] {label} {detail}")

    @property
    def elapsed(self):
        return time.perf_counter() - self.started

    def finish(self):
        elapsed = self.elapsed
        in_time = elapsed < self.limit
        ok = in_time and all(c[1] for c in self.checks)
        failed = [c[0] for c in self.checks if not c[1]]
        if not in_time:
            failed.append(f"runtime {elapsed:.1f}s >= {self.limit}s")
        RESULTS.append((self.number, self.title, ok, elapsed, self.limit, failed))
        line = f"criterion {self.number}: {'PASS' if ok else 'FAIL'} ({elapsed:.1f}s) {self.title}"
        print(line)
        assert ok, f"{line}; failed: {failed}"


@pytest.fixture
def criterion():
    return Criterion()


def pytest_terminal_summary(terminalreporter):
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, ok, elapsed, limit, failed in sorted(RESULTS):
        status = "PASS" if ok else "FAIL"
        terminalreporter.write_line(
            f"criterion {number:>2}: {status}  {elapsed:7.1f}s / {limit}s  {title}")
        for f in failed:
            terminalreporter.write_line(f"               failed: {f}")
