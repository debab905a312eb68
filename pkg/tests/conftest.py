from pathlib import Path

import pytest

from affembed.fields import QQ, adjoin_algebraic, adjoin_transcendental
from affembed.graded import SubalgebraPresentation
from affembed.unipoly import UniPoly

ROOT = Path(__file__).resolve().parents[1]
PROBLEMS = ROOT / "problems"


@pytest.fixture
def sqrt2():
    K = adjoin_algebraic(QQ, "a", [-2, 0, 1])
    return K, K.gen()


@pytest.fixture
def Qu():
    U = adjoin_transcendental(QQ, "u")
    return U, U.gen()


def pres(field, gens, k=None, var="s"):
    return SubalgebraPresentation(field, tuple(gens), k or QQ, var)


def svar(field, var="s"):
    return UniPoly.gen(field, var)


ACCEPTANCE = []  # (number, title, passed, detail), filled by test_acceptance


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n, title, ok, detail in sorted(ACCEPTANCE):
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {n:>2}. {title}: {detail}")
