import pytest

from localmoufang.localring import make_ring
from localmoufang.projective import build_MR


@pytest.fixture(scope="session")
def M9():
    return build_MR(make_ring("zmod:9"))


@pytest.fixture(scope="session")
def M25():
    return build_MR(make_ring("zmod:25"))


@pytest.fixture(scope="session")
def M5():
    return build_MR(make_ring("zmod:5"))


# acceptance criterion number -> (passed, description, detail)
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, desc, detail = ACCEPTANCE[n]
        line = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {desc}"
        if detail:
            line += f"  ({detail})"
        terminalreporter.write_line(line)
