import os
import re

import numpy as np
import pytest

# every cover built during the tests re-verifies its subtree splits
os.environ.setdefault("SIGNLINK_CHECK", "1")

ACCEPTANCE = {}  # criterion number -> (passed, detail)
_DURATIONS = {}


@pytest.fixture
def rng(request):
    # per-test stream derived from the test name, so order does not matter
    return np.random.default_rng(_stable_seed(request.node.nodeid))


def _stable_seed(text):
    h = 0
    for ch in text.encode():
        h = (h * 131 + ch) % (2**32)
    return h


@pytest.fixture
def record():
    def _record(number, passed, detail):
        ACCEPTANCE[number] = (bool(passed), detail)
        print(f"criterion {number}: {'PASS' if passed else 'FAIL'} {detail}")
        return passed

    return _record


def pytest_runtest_logreport(report):
    if report.when == "call":
        m = re.search(r"test_criterion_(\d+)", report.nodeid)
        if m:
            _DURATIONS[int(m.group(1))] = report.duration


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        passed, detail = ACCEPTANCE[k]
        tr.write_line(f"criterion {k:>2}: {'PASS' if passed else 'FAIL'}  {detail}")
    exact = sum(v for k, v in _DURATIONS.items() if k <= 14)
    if exact:
        ok = exact < 600
        tr.write_line(f"criteria 1-14 total time: {exact:.1f} s (< 600 s: {'PASS' if ok else 'FAIL'})")
