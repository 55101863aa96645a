from __future__ import annotations

import time
from contextlib import contextmanager

import pytest

# (number, title, passed, seconds, limit) for each acceptance criterion run
RESULTS: list[tuple[int, str, bool, float, float | None]] = []


@contextmanager
def _criterion(number: int, title: str, limit: float | None = None):
    start = time.perf_counter()
    ok = False
    try:
        yield
        ok = True
    finally:
        dt = time.perf_counter() - start
        within = limit is None or dt < limit
        passed = ok and within
        RESULTS.append((number, title, passed, dt, limit))
        bound = f" < {limit:g} s" if limit else ""
        print(f"[criterion {number}] {'PASS' if passed else 'FAIL'}  {title}  ({dt:.2f} s{bound})")
    assert within, f"criterion {number} took {dt:.1f} s, limit {limit} s"


@pytest.fixture
def criterion():
    return _criterion


def pytest_terminal_summary(terminalreporter):
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, passed, dt, limit in sorted(RESULTS):
        bound = f", limit {limit:g} s" if limit else ""
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {number:>2}. {title}  ({dt:.2f} s{bound})")
