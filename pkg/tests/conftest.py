import os
import sys

import pytest
from hypothesis import settings, strategies as st

sys.path.insert(0, os.path.dirname(__file__))

from loopcoprod.algebra import LoopClass, SpaceSpec  # noqa: E402
from loopcoprod.groups import cyclic, quaternion, trivial  # noqa: E402

import _report  # noqa: E402

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

SMALL_GROUPS = [trivial(), cyclic(2), cyclic(3), cyclic(4), cyclic(6), quaternion(8)]


@st.composite
def spaces(draw, groups=SMALL_GROUPS):
    G = draw(st.sampled_from(groups))
    n = draw(st.sampled_from([3, 5]))
    return SpaceSpec(n, G)


@st.composite
def loop_classes(draw, space, max_k=4, max_terms=4):
    terms = draw(
        st.lists(
            st.tuples(
                st.integers(0, space.group.order - 1),
                st.integers(0, max_k),
                st.integers(-5, 5),
            ),
            max_size=max_terms,
        )
    )
    acc = {}
    for g, k, c in terms:
        acc[(g, k)] = acc.get((g, k), 0) + c
    return LoopClass(space, acc)


@pytest.fixture
def s3():
    return SpaceSpec(3, trivial())


def pytest_terminal_summary(terminalreporter):
    if not _report.LINES:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_report.LINES):
        terminalreporter.write_line(_report.LINES[n])
