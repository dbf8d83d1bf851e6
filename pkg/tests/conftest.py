import os
import sys

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from uncertain_conformance.uncertain_log import (
    INDETERMINATE,
    DETERMINATE,
    SimpleUncertainEvent,
    SimpleUncertainTrace,
    parse_time,
)

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile("default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", deadline=None, max_examples=200, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def running_example() -> SimpleUncertainTrace:
    t = parse_time
    return SimpleUncertainTrace(
        (
            SimpleUncertainEvent("e1", {"A"}, t("2011-12-05T00:00"), t("2011-12-05T00:00")),
            SimpleUncertainEvent("e2", {"B", "C"}, t("2011-12-07T00:00"), t("2011-12-07T00:00")),
            SimpleUncertainEvent("e3", {"D"}, t("2011-12-06T00:00"), t("2011-12-10T00:00")),
            SimpleUncertainEvent("e4", {"A", "C"}, t("2011-12-09T00:00"), t("2011-12-09T00:00")),
            SimpleUncertainEvent("e5", {"E"}, t("2011-12-11T00:00"), t("2011-12-11T00:00"), INDETERMINATE),
        ),
        "0",
    )


@pytest.fixture
def example_trace():
    return running_example()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@st.composite
def uncertain_traces(draw, max_events=5, alphabet="ABCD", max_time=8):
    """Small simple uncertain traces on an integer clock."""
    n = draw(st.integers(0, max_events))
    events = []
    for i in range(n):
        acts = draw(st.sets(st.sampled_from(alphabet), min_size=1, max_size=2))
        lo = draw(st.integers(0, max_time))
        hi = draw(st.integers(lo, min(max_time, lo + 3)))
        flag = draw(st.sampled_from([DETERMINATE, DETERMINATE, INDETERMINATE]))
        events.append(SimpleUncertainEvent(f"e{i}", frozenset(acts), lo, hi, flag))
    return SimpleUncertainTrace(tuple(events), "h")


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
