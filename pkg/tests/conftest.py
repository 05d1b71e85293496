import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from autoqc.fixtures import (
    cyclic_structure,
    s3_structure,
    shortlex_free,
    shortlex_free_abelian,
)

# Verdicts from the numbered acceptance tests; rendered after the run so
# they survive pytest's output capture.
_criterion_results = []
_criterion_notes = []


def note_for_summary(text):
    _criterion_notes.append(text)


def pytest_configure(config):
    config.addinivalue_line(
        "markers", "criterion(num, slug): numbered acceptance gate"
    )


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if report.when != "call":
        return
    mark = item.get_closest_marker("criterion")
    if mark is not None:
        _criterion_results.append((mark.args[0], mark.args[1], report.passed))


def pytest_terminal_summary(terminalreporter):
    if not _criterion_results:
        return
    terminalreporter.section("acceptance criteria")
    for num, slug, passed in sorted(_criterion_results):
        terminalreporter.write_line(
            "CRITERION %d (%s): %s" % (num, slug, "PASS" if passed else "FAIL")
        )
    for note in _criterion_notes:
        terminalreporter.write_line("  " + note)


@pytest.fixture(scope="session")
def free2():
    return shortlex_free(2)


@pytest.fixture(scope="session")
def zz():
    return shortlex_free_abelian()


@pytest.fixture(scope="session")
def z3():
    return cyclic_structure(3)


@pytest.fixture(scope="session")
def s3():
    return s3_structure()
