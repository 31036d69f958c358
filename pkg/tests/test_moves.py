from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from planecurves.diagram import (
    convex_drawing,
    diagram_from_curve,
    same_up_to_renaming,
    validate,
)
from planecurves.graphs import complete_graph, cycle_graph, graph_from_shorthand
from planecurves.knots import d_value
from planecurves.moves import (
    KINDS,
    MoveSite,
    StaleMoveError,
    apply_move,
    crossing_delta,
    enumerate_moves,
    random_walk,
)

INVERSE = {"R1+": "R1-", "R1-": "R1+", "R2+": "R2-", "R2-": "R2+", "R3": "R3",
           "R4+": "R4-", "R4-": "R4+", "R5+": "R5-", "R5-": "R5+"}


def kinds_at(d):
    return {s.kind for s in enumerate_moves(d)}


def undo_exists(before, after, kind) -> bool:
    return any(
        same_up_to_renaming(apply_move(after, s, check=False), before)
        for s in enumerate_moves(after, kinds=(INVERSE[kind],))
    )


def is_self_bigon(d, s) -> bool:
    """A bigon whose two sides lie on one edge segment pair of the same edge."""
    a, b = (d.crossings[x] for x in s.data)
    return {a.first[0], a.second[0]} == {b.first[0], b.second[0]} and a.first[0] == a.second[0]


def test_embedded_circle_sites():
    kinds = kinds_at(convex_drawing(cycle_graph(6)))
    assert "R1+" in kinds
    assert not kinds & {"R1-", "R2-", "R3"}


def test_convex_k5_has_no_monogons(k5):
    assert not enumerate_moves(k5, kinds=("R1-",))


def test_trefoil_triangle_has_one_free_trigon(trefoil_curve):
    # each arc of the trefoil bounds one of its two trigons, so a vertex blocks one
    d = diagram_from_curve(trefoil_curve, 3)
    assert len(enumerate_moves(d, kinds=("R3",))) == 1


def test_r2_plus_on_convex_k6(k6):
    s = enumerate_moves(k6, kinds=("R2+",))[0]
    after = apply_move(k6, s)
    assert after.crossing_count == 17 and validate(after).ok


def test_r1_round_trip(k5):
    for s in enumerate_moves(k5, kinds=("R1+",))[:12]:
        after = apply_move(k5, s)
        assert after.crossing_count == 6
        assert undo_exists(k5, after, "R1+")


def test_r3_is_an_involution():
    d = random_walk(convex_drawing(complete_graph(5)), 40, 1, 14)
    sites = enumerate_moves(d, kinds=("R3",))
    assert sites
    for s in sites:
        after = apply_move(d, s)
        assert after.crossing_count == d.crossing_count
        again = MoveSite("R3", s.data)
        assert same_up_to_renaming(apply_move(after, again), d)


def test_every_kind_is_reachable_and_undoable():
    seen = set()
    rng = random.Random(5)
    d = convex_drawing(graph_from_shorthand("K3,3"))
    for _ in range(60):
        sites = [s for s in enumerate_moves(d) if d.crossing_count + crossing_delta(d, s) <= 16]
        by_kind: dict[str, list] = {}
        for s in sites:
            by_kind.setdefault(s.kind, []).append(s)
        for kind, group in by_kind.items():
            s = rng.choice(group)
            if kind == "R2-" and is_self_bigon(d, s):
                continue
            after = apply_move(d, s)
            assert validate(after).ok
            assert after.crossing_count == d.crossing_count + crossing_delta(d, s)
            assert undo_exists(d, after, kind), (kind, s)
            seen.update((kind, INVERSE[kind]))
        d = apply_move(d, rng.choice(sites))
    assert seen == set(KINDS)


def test_r4_plus_adds_degree_many_crossings(k5):
    for s in enumerate_moves(k5, kinds=("R4+",))[:5]:
        assert crossing_delta(k5, s) == 4
        assert apply_move(k5, s).crossing_count == 9


def test_stale_site_is_rejected(k5):
    with pytest.raises(StaleMoveError):
        apply_move(k5, MoveSite("R1-", ("nope",)))
    with pytest.raises(StaleMoveError):
        apply_move(k5, MoveSite("R3", ("x1", "x2", "x3")))


def test_random_walk_zero_steps_is_identity(k6):
    assert random_walk(k6, 0, 1) is k6


def test_random_walk_is_deterministic(k6):
    a = random_walk(k6, 60, 11, 30)
    b = random_walk(k6, 60, 11, 30)
    assert a.dumps() == b.dumps()
    assert a.dumps() != random_walk(k6, 60, 12, 30).dumps()


def test_long_walk_stays_valid(k6):
    d = random_walk(k6, 200, 7, 40)
    assert validate(d).ok
    assert d.graph == k6.graph
    assert d.crossing_count <= 40


def test_walk_above_cap_only_descends(k6):
    d = random_walk(k6, 60, 1, 30)
    e = random_walk(d, 30, 2, 5)
    assert e.crossing_count <= d.crossing_count and e.dumps() != d.dumps()
    assert random_walk(k6, 20, 2, 10).dumps() == k6.dumps()


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from(["K5", "K3,3"]))
def test_walks_preserve_d_parity(seed, host):
    d = random_walk(convex_drawing(graph_from_shorthand(host)), 40, seed, 20)
    assert validate(d).ok
    assert d_value(d) % 2 == 1


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 10**6))
def test_each_step_matches_its_delta(seed):
    rng = random.Random(seed)
    d = convex_drawing(complete_graph(4))
    for _ in range(15):
        sites = [s for s in enumerate_moves(d) if d.crossing_count + crossing_delta(d, s) <= 12]
        s = rng.choice(sites)
        after = apply_move(d, s)
        assert validate(after).ok
        assert after.crossing_count == d.crossing_count + crossing_delta(d, s)
        d = after


def test_site_json():
    d = convex_drawing(cycle_graph(3))
    s = enumerate_moves(d, kinds=("R1+",))[0]
    assert s.to_json() == {"kind": "R1+", "data": list(s.data)}
