import functools

import pytest

from hypothesis import settings

from binradix.admissible import Variant, check_admissible
from binradix.binstr import parse_epstring
from binradix.radix import build

settings.register_profile("default", deadline=None)
settings.load_profile("default")

STD = ("0(1)", "1(0)")
GOLDEN = ("(01)", "1(0)")
CUBIC = [("(01000)", "1(0)"), ("(011)", "(10)"), ("(01)", "(100)")]
QUINTIC = ("(01101)", "(100)")
SPARSE = ("01(10)", "10(01)")

NON_NULL = [STD, GOLDEN, *CUBIC]
ALL_PAIRS = [*NON_NULL, QUINTIC, SPARSE]


@functools.lru_cache(maxsize=None)
def pair(a, b):
    return check_admissible(parse_epstring(a), parse_epstring(b))


@functools.lru_cache(maxsize=None)
def system(a, b, variant="-"):
    return build(pair(a, b), Variant.parse(variant))


_CRITERIA = {}
_NOTES = []


@pytest.fixture
def report():
    """Attach a line to the acceptance summary."""
    return _NOTES.append


def pytest_runtest_logreport(report):
    name = report.nodeid.split("::")[-1]
    if "test_acceptance.py" not in report.nodeid or not name.startswith("test_criterion_"):
        return
    if report.when == "call" or report.outcome != "passed":
        num = int(name.split("_")[2])
        failed = report.outcome == "failed" or _CRITERIA.get(num) == "FAIL"
        _CRITERIA[num] = "FAIL" if failed else "PASS"


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_CRITERIA):
        terminalreporter.write_line(f"criterion {num:2d}: {_CRITERIA[num]}")
    for note in _NOTES:
        terminalreporter.write_line(f"  note: {note}")
