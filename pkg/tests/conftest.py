from __future__ import annotations

from pathlib import Path

import pytest

from planforge.kb import default_kb
from planforge.pddl import parse_domain, parse_plan, parse_problem
from planforge.workspace import project_from_asts

FIXTURES = Path(__file__).parent / "fixtures"

DOMAIN_FIXTURES = ("d1.pddl", "d1b.pddl", "blocks.pddl", "gripper.pddl",
                   "switchworld.pddl", "ferry.pddl")


def read_fixture(name: str) -> str:
    return (FIXTURES / name).read_text()


@pytest.fixture(scope="session")
def d1():
    return parse_domain(read_fixture("d1.pddl"))


@pytest.fixture(scope="session")
def d1b():
    return parse_domain(read_fixture("d1b.pddl"))


@pytest.fixture(scope="session")
def p1():
    return parse_problem(read_fixture("p1.pddl"))


@pytest.fixture(scope="session")
def pl1():
    return parse_plan(read_fixture("pl1.txt"))


@pytest.fixture()
def d1_project(d1, p1):
    return project_from_asts(d1, [p1], kb=default_kb())


@pytest.fixture()
def d1b_project(d1b, p1):
    return project_from_asts(d1b, [p1], kb=default_kb())
