from __future__ import annotations

import sys
from pathlib import Path

import pytest

from folwfs import Atom, LiteralSet, Term, parse_file

DATA = Path(__file__).parent / "data"
sys.path.insert(0, str(Path(__file__).parent))

# Lines recorded by test_acceptance.py, echoed once more at the end of the run.
ACCEPTANCE_LINES: list[str] = []


def A(text: str) -> Atom:
    """``A("P(a,b)")`` builds the ground atom ``P(a,b)``; ``A("p")`` a 0-ary one."""
    if "(" not in text:
        return Atom(text, ())
    name, rest = text.split("(", 1)
    return Atom(name, tuple(Term(t.strip()) for t in rest.rstrip(")").split(",")))


def lits(*items: str) -> LiteralSet:
    pos = {A(x) for x in items if not x.startswith("~")}
    neg = {A(x[1:]) for x in items if x.startswith("~")}
    return LiteralSet(frozenset(pos), frozenset(neg))


@pytest.fixture(scope="session")
def kb_intro():
    return parse_file(DATA / "intro.folkb")


@pytest.fixture(scope="session")
def kb_ex2():
    return parse_file(DATA / "ex2.folkb")


@pytest.fixture(scope="session")
def kb_ex3():
    return parse_file(DATA / "ex3.folkb")


@pytest.fixture(scope="session")
def kb_assist():
    return parse_file(DATA / "assist.folkb")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
