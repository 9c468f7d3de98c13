import pytest

from lagrange_ppc.polyspace import default_candidate_set
from lagrange_ppc.rs_lagrange import make_context


@pytest.fixture
def ex1():
    ctx = make_context(4, 2, 2)
    return ctx, default_candidate_set(2, 2, 3, ctx.q)


@pytest.fixture
def ex2():
    ctx = make_context(4, 2, 2, systematic=True)
    return ctx, default_candidate_set(2, 2, 3, ctx.q)


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[num])
