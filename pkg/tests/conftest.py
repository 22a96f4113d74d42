import pytest

from helpers import algebra, example1_modules, example2_modules
from perforated import mutation as MU


@pytest.fixture(scope="session")
def a4():
    return algebra("a4_char2")


@pytest.fixture(scope="session")
def ex1(a4):
    M, X, Y = example1_modules(a4)
    return {"A": a4, "M": M, "X": X, "Y": Y, "Mt": MU.total_module(M)}


@pytest.fixture(scope="session")
def ex1_report(ex1):
    return MU.mutate(ex1["X"], ex1["M"], [0, 1], "left")


@pytest.fixture(scope="session")
def small():
    return algebra("small")


@pytest.fixture(scope="session")
def ex2(small):
    M, X, Y = example2_modules(small)
    return {"A": small, "M": M, "X": X, "Y": Y, "Mt": MU.total_module(M)}


@pytest.fixture(scope="session")
def dual_numbers():
    return algebra("dual_numbers")


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(RESULTS):
        ok, title, seconds = RESULTS[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {title}  ({seconds:.1f} s)")
