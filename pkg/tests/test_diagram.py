from __future__ import annotations

import itertools
import json
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from planecurves.corpus import realizable_curves
from planecurves.curves import chord_diagram, equivalent
from planecurves.diagram import (
    Crossing,
    DiagramError,
    DiagramFormatError,
    ImmersedDiagram,
    canonical_relabel,
    convex_drawing,
    crossing_count,
    diagram_from_curve,
    restrict_to_cycle,
    same_up_to_renaming,
    straight_line_diagram,
    validate,
)
from planecurves.graphs import Cycle, complete_graph, cycle_graph, graph_from_shorthand
from planecurves.knots import a2_avg


def convex_crossings(g, order, edges) -> int:
    """Chords of points in convex position cross exactly when their ends interleave."""
    place = {v: i for i, v in enumerate(order)}
    count = 0
    for e, f in itertools.combinations(edges, 2):
        a, b = sorted(place[v] for v in g.edges[e])
        c, d = sorted(place[v] for v in g.edges[f])
        if len({a, b, c, d}) == 4 and (a < c < b) != (a < d < b):
            count += 1
    return count


K6 = convex_drawing(complete_graph(6))


def strip_crossings(d: ImmersedDiagram) -> ImmersedDiagram:
    return ImmersedDiagram(d.graph, d.rotations, tuple(() for _ in d.traversals), {})


def test_embedded_hexagon_is_valid():
    d = convex_drawing(cycle_graph(6))
    assert d.crossing_count == 0 and validate(d).ok


def test_genus_one_map_is_topological_error():
    report = validate(strip_crossings(convex_drawing(graph_from_shorthand("K3,3"))))
    assert not report.ok
    assert [(v.kind, v.message) for v in report.violations] == [("topological", "genus 1")]


def test_single_occurrence_is_structural_error(k5):
    data = k5.to_json()
    xid = next(iter(data["crossings"]))
    rec = data["crossings"][xid]
    edge, slot = rec["second"]
    data["traversals"][edge].pop(slot)
    d = ImmersedDiagram.from_json(data)
    report = validate(d)
    assert report.structural and not report.topological
    assert any(v.where == f"crossing {xid}" for v in report.violations)


def test_rotation_must_list_incident_edges(k5):
    data = k5.to_json()
    data["rotations"]["v1"] = data["rotations"]["v1"][:-1]
    report = validate(ImmersedDiagram.from_json(data))
    assert any(v.where == "vertex v1" for v in report.structural)


def test_bad_handedness_is_structural(k5):
    data = k5.to_json()
    next(iter(data["crossings"].values()))["handedness"] = "Q"
    assert validate(ImmersedDiagram.from_json(data)).structural


@pytest.mark.parametrize("n", [4, 5, 6, 7])
def test_convex_complete_crossing_count(n):
    d = convex_drawing(complete_graph(n))
    assert crossing_count(d) == math.comb(n, 4)
    assert validate(d).ok
    for x in d.crossings.values():
        assert d.graph.edges_disjoint(x.first[0], x.second[0])


def test_convex_drawing_cycle_graph_has_no_crossings():
    assert convex_drawing(cycle_graph(6)).crossing_count == 0


@settings(max_examples=30, deadline=None)
@given(st.permutations([f"v{i}" for i in range(1, 7)]))
def test_convex_orders_match_interleaving_oracle(order):
    g = complete_graph(6)
    d = convex_drawing(g, order)
    assert d.crossing_count == 15 and validate(d).ok
    g33 = graph_from_shorthand("K3,3")
    names = dict(zip(complete_graph(6).vertices, g33.vertices))
    order33 = [names[v] for v in order]
    d33 = convex_drawing(g33, order33)
    assert d33.crossing_count == convex_crossings(g33, [g33.vertex_index(v) for v in order33], range(g33.size))


def test_parabola_arc_is_accepted_while_generic():
    d = convex_drawing(complete_graph(6), arc="parabola")
    assert d.crossing_count == 15


def test_straight_line_rejects_concurrent_segments():
    # diagonals of a square with its centre as a fifth vertex meet at that vertex
    with pytest.raises(DiagramError):
        straight_line_diagram(complete_graph(5), [(0, 0), (2, 0), (2, 2), (0, 2), (1, 1)])


def test_hull_cycle_restricts_to_embedded_circle(k6):
    f = restrict_to_cycle(k6, ["v1", "v2", "v3", "v4", "v5", "v6"])
    assert f.crossing_count == 0


@settings(max_examples=40, deadline=None)
@given(st.permutations(range(1, 6)), st.integers(3, 6))
def test_restriction_matches_interleaving_oracle(perm, n):
    k6 = K6
    vs = (0,) + tuple(perm[: n - 1])
    gamma = Cycle(vs)
    f = restrict_to_cycle(k6, gamma)
    assert f.crossing_count == convex_crossings(k6.graph, range(6), gamma.edge_list(k6.graph))
    assert f.genus() == 0


def test_triangle_restriction_is_empty(k6):
    assert restrict_to_cycle(k6, ["v1", "v3", "v5"]).crossing_count == 0


def test_reversed_cycle_reverses_chord_diagram(k6):
    f = restrict_to_cycle(k6, Cycle((0, 2, 4, 1, 3, 5)))
    b = restrict_to_cycle(k6, Cycle((0, 5, 3, 1, 4, 2)))
    assert equivalent(chord_diagram(b), type(chord_diagram(f))(tuple(reversed(chord_diagram(f).word))))
    assert a2_avg(f) == a2_avg(b)


def test_restrict_rejects_non_cycle():
    d = convex_drawing(graph_from_shorthand("K3,3"))
    with pytest.raises(DiagramError):
        restrict_to_cycle(d, ["a1", "a2", "b1"])


def test_json_round_trip_is_byte_identical(k6):
    text = k6.dumps()
    again = ImmersedDiagram.loads(text).dumps()
    assert again == text
    assert json.loads(text)["crossings"]


@pytest.mark.parametrize(
    "text",
    [
        "[]",
        "{}",
        '{"graph": {"vertices": ["a"], "edges": []}, "rotations": {"b": []}, "traversals": {}, "crossings": {}}',
        "not json",
    ],
)
def test_malformed_json_raises_format_error(text):
    with pytest.raises(DiagramFormatError):
        ImmersedDiagram.loads(text)


def test_canonical_relabel(k6):
    renamed = ImmersedDiagram(
        k6.graph, k6.rotations, tuple(tuple("z" + x for x in t) for t in k6.traversals),
        {"z" + k: v for k, v in k6.crossings.items()},
    )
    assert same_up_to_renaming(k6, renamed)
    assert canonical_relabel(renamed).dumps() == canonical_relabel(k6).dumps()


def test_swapped_slots_are_the_same_diagram(k5):
    swapped = {k: Crossing(x.second, x.first, -x.hand) for k, x in k5.crossings.items()}
    other = ImmersedDiagram(k5.graph, k5.rotations, k5.traversals, swapped)
    assert same_up_to_renaming(k5, other)


def test_diagram_from_curve_round_trip():
    for f in realizable_curves(5):
        for n in (3, 4, 5):
            d = diagram_from_curve(f, n)
            assert validate(d).ok
            back = restrict_to_cycle(d, Cycle(tuple(range(n))))
            assert back.relabeled().to_json() == f.relabeled().to_json()


def test_diagram_from_curve_rejects_nonplanar():
    from planecurves.curves import PlaneCurve

    with pytest.raises(DiagramError):
        diagram_from_curve(PlaneCurve((1, 2, 3, 1, 2, 3), {1: 1, 2: 1, 3: 1}))
