from __future__ import annotations

import itertools
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from planecurves.graphs import (
    Cycle,
    Graph,
    GraphError,
    canonical_rotation,
    complete_graph,
    complete_multipartite,
    cycle_graph,
    cycles,
    disjoint_edge_pairs,
    graph_from_shorthand,
    induced_subgraph,
    iter_cycles,
    path_graph,
)


def brute_cycles(g: Graph, n: int) -> set[tuple[int, ...]]:
    """Every n-cycle as a canonical tuple, by checking all vertex sequences."""
    out = set()
    for vs in itertools.permutations(range(g.order), n):
        if all(g.edge_between(vs[i], vs[(i + 1) % n]) is not None for i in range(n)):
            out.add(canonical_rotation(vs))
    return out


def brute_disjoint_pairs(g: Graph) -> int:
    count = 0
    for e, f in itertools.combinations(range(g.size), 2):
        if not set(g.edges[e]) & set(g.edges[f]):
            count += 1
    return count


@pytest.mark.parametrize("n, size", [(6, 15), (1, 0), (12, 66)])
def test_complete_graph_size(n, size):
    assert complete_graph(n).size == size


@pytest.mark.parametrize("parts, size", [([3, 3], 9), ([3, 3, 1], 15), ([1, 1], 1)])
def test_complete_multipartite_size(parts, size):
    assert complete_multipartite(parts).size == size


def test_k33_has_no_edges_within_parts():
    g = graph_from_shorthand("K3,3")
    for a, b in g.edges:
        assert g.vertices[a][0] != g.vertices[b][0]


def test_cycle_counts():
    assert len(cycles(complete_graph(6), 6)) == math.factorial(5) // 2
    assert len(cycles(complete_graph(4), 3)) == 4


@pytest.mark.parametrize("name, n", [("K3,3,1", 7), ("K5", 4), ("K3,3", 6), ("K6", 5), ("K3,3,1", 5)])
def test_cycles_match_brute_force(name, n):
    g = graph_from_shorthand(name)
    found = cycles(g, n)
    assert {c.vertices for c in found} == brute_cycles(g, n)
    assert len(found) == len({c.vertices for c in found})


def test_cycles_are_canonical_and_sorted():
    found = cycles(complete_graph(6), 6)
    assert found == sorted(found)
    for c in found:
        assert c.vertices == canonical_rotation(c.vertices)


def test_iter_cycles_resume_and_prefix_partition():
    g = complete_graph(7)
    full = list(iter_cycles(g, 7))
    assert list(iter_cycles(g, 7, start_after=full[99])) == full[100:]
    parts = []
    for a in range(1, 7):
        for b in range(1, 7):
            if a != b:
                parts.extend(iter_cycles(g, 7, prefix=(0, a, b)))
    assert parts == full


def test_disjoint_edge_pairs():
    assert len(disjoint_edge_pairs(complete_graph(5))) == 15
    k33 = graph_from_shorthand("K3,3")
    assert len(disjoint_edge_pairs(k33)) == brute_disjoint_pairs(k33) == 18
    assert disjoint_edge_pairs(path_graph(3)) == []


def test_induced_subgraph():
    k8 = complete_graph(8)
    sub = induced_subgraph(k8, ["v2", "v3", "v5", "v7", "v8"])
    assert sub.order == 5 and sub.size == 10
    k33 = graph_from_shorthand("K3,3")
    assert induced_subgraph(k33, ["a1", "a2", "b1"]).edge_names == ("a1-b1", "a2-b1")
    assert induced_subgraph(k33, k33.vertices) == k33


def test_shorthand_parsing():
    assert graph_from_shorthand("C6") == cycle_graph(6)
    assert graph_from_shorthand("K 3, 3") == complete_multipartite([3, 3])
    with pytest.raises(GraphError):
        graph_from_shorthand("P5")


def test_graph_rejects_loops_and_parallel_edges():
    with pytest.raises(GraphError):
        Graph(("a", "b"), ((0, 0),), ("e",))
    with pytest.raises(GraphError):
        Graph(("a", "b"), ((0, 1), (1, 0)), ("e", "f"))


def test_graph_json_round_trip():
    g = graph_from_shorthand("K3,3,1")
    assert Graph.from_json(g.to_json()) == g


def test_cycle_edge_list_rejects_non_edges():
    g = graph_from_shorthand("K3,3")
    with pytest.raises(GraphError):
        Cycle((0, 1, 3)).edge_list(g)


@settings(max_examples=50, deadline=None)
@given(st.permutations(range(7)), st.integers(0, 6), st.booleans())
def test_canonical_rotation_is_rotation_and_reflection_invariant(vs, k, flip):
    other = vs[k:] + vs[:k]
    if flip:
        other = other[::-1]
    assert canonical_rotation(vs) == canonical_rotation(other)
