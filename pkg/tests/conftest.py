import sys
from pathlib import Path

import pytest
from hypothesis import settings
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from boxball.core import BallConfig, Excursion  # noqa: E402

settings.register_profile("default", max_examples=200, deadline=None)
settings.load_profile("default")


@st.composite
def configs(draw, max_len=60, min_origin=-20, max_origin=20):
    bits = draw(st.lists(st.integers(0, 1), max_size=max_len))
    origin = draw(st.integers(min_origin, max_origin))
    return BallConfig(origin, bytes(bits))


@st.composite
def excursions(draw, max_n=12):
    n = draw(st.integers(0, max_n))
    steps = []
    up = down = 0
    while down < n:
        if up < n and (up == down or draw(st.booleans())):
            steps.append("U")
            up += 1
        else:
            steps.append("D")
            down += 1
    return Excursion("".join(steps))


_criteria: dict[int, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    number, title = mark.args
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        prev = _criteria.get(number, (title, "PASS"))[1]
        status = "PASS" if rep.outcome == "passed" and prev == "PASS" else "FAIL"
        _criteria[number] = (title, status)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        title, status = _criteria[number]
        terminalreporter.write_line(f"criterion {number:>2}: {status}  {title}")
