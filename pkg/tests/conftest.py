"""Shared generators for the test suite (seeded, exact-arithmetic friendly)."""

from __future__ import annotations

import random

import pytest

from bnsr import Chain, cone_set, make_cell
from bnsr.resolutions import Resolution


def random_form(rng: random.Random, dim: int):
    while True:
        vec = tuple(rng.randint(-2, 2) for _ in range(dim))
        if any(vec):
            return vec


def random_cone_set(rng: random.Random, dim: int, max_cells: int = 3, pool: int = 3):
    forms = [random_form(rng, dim) for _ in range(pool)]
    cells = []
    for _ in range(rng.randint(0, max_cells)):
        eqs = [rng.choice(forms) for _ in range(rng.randint(0, 1))]
        gts = [rng.choice(forms) for _ in range(rng.randint(0, 2))]
        cells.append(make_cell(eqs, gts))
    return cone_set(dim, cells, validate=True)


def random_group_element(rng: random.Random, group, radius: int = 2):
    ball = group.ball(radius if len(group.factors()) == 1 else (radius,) * len(group.factors()))
    return rng.choice(ball)


def random_chain(F: Resolution, rng: random.Random, degree: int, radius: int = 2, terms: int = 3) -> Chain:
    ring = F.ring
    cells = F.cells(degree)
    out = []
    for _ in range(terms):
        g = random_group_element(rng, F.group, radius)
        cell = rng.choice(cells)
        out.append(((g, cell), ring.from_int(rng.choice([-2, -1, 1, 2]))))
    return Chain(ring, out)


@pytest.fixture
def rng():
    return random.Random(20240817)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
