from __future__ import annotations

from pathlib import Path

import pytest

from planecurves.curves import curve_from_word
from planecurves.diagram import convex_drawing
from planecurves.graphs import complete_graph, graph_from_shorthand
from planecurves.knots import FIRST, SECOND, KnotDiagram

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "fixtures"


def alternating(f) -> KnotDiagram:
    """Over at even positions of the based curve."""
    return KnotDiagram(f, {x: FIRST if p % 2 == 0 else SECOND for x, (p, _) in f.positions().items()})


@pytest.fixture(scope="session")
def trefoil_curve():
    return curve_from_word([1, 2, 3, 1, 2, 3])


@pytest.fixture(scope="session")
def fig8_curve():
    return curve_from_word([1, 2, 3, 4, 2, 1, 4, 3])


@pytest.fixture(scope="session")
def k5():
    return convex_drawing(complete_graph(5))


@pytest.fixture(scope="session")
def k6():
    return convex_drawing(complete_graph(6))


@pytest.fixture(scope="session")
def k8():
    return convex_drawing(complete_graph(8))


@pytest.fixture(scope="session")
def k33():
    return convex_drawing(graph_from_shorthand("K3,3"))


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in range(1, 12):
        status, title = mod.RESULTS.get(number, ("NOT RUN", ""))
        terminalreporter.write_line(f"criterion {number:2d}: {status:4s}  {title}")
