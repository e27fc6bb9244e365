from __future__ import annotations

import os

import pytest

from girthwright.generator import embed_planar
from girthwright.plane_graph import PlaneGraph

DATA = os.path.join(os.path.dirname(__file__), "..", "src", "girthwright", "data")

ACCEPTANCE_LINES: list[str] = []


def cycle(n: int) -> PlaneGraph:
    return embed_planar(n, [(i, (i + 1) % n) for i in range(n)])


def path(n: int) -> PlaneGraph:
    return embed_planar(n, [(i, i + 1) for i in range(n - 1)])


def k4() -> PlaneGraph:
    return embed_planar(4, [(a, b) for a in range(4) for b in range(a + 1, 4)])


def k4_minus_13() -> PlaneGraph:
    """Vertices v1..v4 are 0..3; the missing edge is v1v3; outer cycle
    v1 v2 v3 v4."""
    return embed_planar(4, [(0, 1), (1, 2), (2, 3), (3, 0), (1, 3)], outer_cycle=[0, 1, 2, 3])


def bowtie() -> PlaneGraph:
    return embed_planar(5, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)])


def c4_chord() -> PlaneGraph:
    return embed_planar(4, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)], outer_cycle=[0, 1, 2, 3])


def wheel(rim: int) -> PlaneGraph:
    edges = [(i, (i + 1) % rim) for i in range(rim)] + [(i, rim) for i in range(rim)]
    return embed_planar(rim + 1, edges, outer_cycle=list(range(rim)))


def data_file(name: str) -> str:
    return os.path.join(DATA, name)


@pytest.fixture
def graphs():
    return {
        "C5": cycle(5),
        "P3": path(3),
        "K4": k4(),
        "K4-e": k4_minus_13(),
        "bowtie": bowtie(),
        "C4+chord": c4_chord(),
        "W5": wheel(5),
    }


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
