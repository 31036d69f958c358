"""Acceptance criteria 1-11.

Each test records PASS, FAIL or SKIP; the terminal summary prints one line per
criterion (see ``conftest.py``).  Run alone with
``pytest tests/test_acceptance.py -v``.
"""

from __future__ import annotations

import functools
import time
from fractions import Fraction
from pathlib import Path

import pytest
from conftest import FIXTURES, alternating

from planecurves.corpus import realizable_curves, seeds
from planecurves.curves import C1, C2, ChordDiagram, chord_diagram, contains_subchord, r1_reducible, verify_injection
from planecurves.diagram import ImmersedDiagram, convex_drawing, restrict_to_cycle, validate
from planecurves.graphs import complete_graph, graph_from_shorthand, iter_cycles
from planecurves.knots import (
    KnotDiagram,
    a2,
    a2_all,
    a2_avg,
    a2_crosscheck,
    alpha,
    crossing_sign,
    d_value,
    linking_number,
    resolutions,
)
from planecurves.moves import random_walk
from planecurves.theorems import (
    EXPECTED_DELTA,
    MOVE_CASES,
    check_alpha_congruence,
    check_d_parity,
    find_nontrivial_projection,
    force_chord_diagram,
    move_delta_cases,
    search_fig8_in_K12,
)

RESULTS: dict[int, tuple[str, str]] = {}


def criterion(number: int, title: str):
    def wrap(fn):
        @functools.wraps(fn)
        def run(*args, **kwargs):
            try:
                fn(*args, **kwargs)
            except pytest.skip.Exception as exc:
                RESULTS[number] = ("SKIP", f"{title} ({exc.msg})")
                raise
            except BaseException:
                RESULTS[number] = ("FAIL", title)
                raise
            RESULTS[number] = ("PASS", title)

        return run

    return wrap


def max_cycle_crossings(d, n) -> int:
    return max(restrict_to_cycle(d, gamma).crossing_count for gamma in iter_cycles(d.graph, n))


@criterion(1, "4 alpha is odd on convex K6 and 100 random walks (200 moves, cap 40)")
def test_criterion_1_alpha_congruence():
    k6 = convex_drawing(complete_graph(6))
    assert check_alpha_congruence(k6) == (Fraction(25, 4), True)
    crosschecked = 0
    for seed in seeds(1, 100):
        d = random_walk(k6, 200, seed, 40)
        assert validate(d).ok and d.crossing_count <= 40
        value, odd = check_alpha_congruence(d, method="pairs")
        assert odd, (seed, value)
        # enumeration agrees wherever every cycle is small enough to enumerate quickly
        if crosschecked < 10 and max_cycle_crossings(d, 6) <= 14:
            assert alpha(d) == value
            crosschecked += 1
    assert crosschecked >= 1


@criterion(2, "d = 5 on convex K5; d odd on 100 random K5 and 100 random K3,3 diagrams")
def test_criterion_2_d_parity():
    k5 = convex_drawing(complete_graph(5))
    assert check_d_parity(k5) == (5, True)
    for host in ("K5", "K3,3"):
        start = convex_drawing(graph_from_shorthand(host))
        for seed in seeds(2, 100):
            d = random_walk(start, 100, seed, 30)
            t = time.perf_counter()
            value, odd = check_d_parity(d)
            assert time.perf_counter() - t < 0.1
            assert validate(d).ok and odd, (host, seed, value)


@criterion(3, "skein identity and a2 = a2_crosscheck on every resolution of the 6-crossing corpus")
def test_criterion_3_skein_and_oracle():
    curves = realizable_curves(6)
    assert len(curves) >= 200
    for f in curves:
        labels = f.labels()
        table = a2_all(f)
        for mask, k in enumerate(resolutions(f)):
            value = a2(k)
            assert value == a2_crosscheck(k) == table[mask]
            for i, x in enumerate(labels):
                if crossing_sign(k, x) == 1:
                    # K- is the same resolution with crossing x switched
                    assert value - table[mask ^ (1 << i)] == linking_number(k, x)


@criterion(4, "trefoil a2 = 1, figure-eight a2 = -1, trefoil curve average 1/4, small diagrams 0")
def test_criterion_4_canonical_values(trefoil_curve, fig8_curve):
    assert a2(alternating(trefoil_curve)) == 1
    assert a2(alternating(fig8_curve)) == -1
    assert a2_avg(trefoil_curve) == Fraction(1, 4)
    for f in realizable_curves(2):
        assert all(a2(k) == 0 for k in resolutions(f))


@criterion(5, "averaged a2 changes by 0, 0, 1/4, 1/4, 1/4 under the five local move cases")
def test_criterion_5_move_deltas():
    cases = move_delta_cases(hosts=20, seed=0)
    for name in MOVE_CASES:
        assert len(cases[name]) == 20, name
        assert set(cases[name]) == {EXPECTED_DELTA[name]}, (name, cases[name])


@criterion(6, "both 2-chord patterns are forced on convex K8 and 20 random K8 diagrams")
def test_criterion_6_force_k8():
    k8 = convex_drawing(complete_graph(8))
    hosts = [k8] + [random_walk(k8, 100, seed, 90) for seed in seeds(6, 20)]
    for d in hosts:
        assert validate(d).ok
        for word in ((1, 2, 1, 2), (1, 1, 2, 2)):
            pat = ChordDiagram(word)
            t = time.perf_counter()
            w = force_chord_diagram(d, pat)
            assert time.perf_counter() - t < 10
            f = restrict_to_cycle(d, w.cycle)
            assert len(w.cycle) == 8 and verify_injection(chord_diagram(f), pat, w.injection)


@criterion(7, "R1-reducible exactly when no C1 sub-diagram, on the 6-crossing corpus")
def test_criterion_7_r1_vs_c1():
    for f in realizable_curves(6):
        assert r1_reducible(f) == (contains_subchord(chord_diagram(f), C1) is None), f.sequence


@criterion(8, "C1 / C2 containment match the knot oracle on the 5-crossing corpus")
def test_criterion_8_presets_vs_knots():
    for f in realizable_curves(5):
        values = set(a2_all(f).tolist()) if f.crossing_count else {0}
        cd = chord_diagram(f)
        assert (contains_subchord(cd, C1) is not None) == any(v != 0 for v in values), f.sequence
        assert (contains_subchord(cd, C2) is not None) == (-1 in values), f.sequence


@criterion(9, "a knotted cycle is found and verified on convex K6 and 10 random K6 diagrams")
def test_criterion_9_nontrivial_projection():
    k6 = convex_drawing(complete_graph(6))
    for d in [k6] + [random_walk(k6, 100, seed, 30) for seed in seeds(9, 10)]:
        t = time.perf_counter()
        w = find_nontrivial_projection(d)
        assert time.perf_counter() - t < 5
        k = KnotDiagram.from_json(w.to_json(d.graph)["knot"])
        assert a2(k) == a2_crosscheck(k) != 0
        assert k.curve.chord_diagram() == restrict_to_cycle(d, w.cycle).chord_diagram()


@criterion(10, "a figure-eight cycle of convex K12 is found by forcing and by streaming")
def test_criterion_10_fig8_k12():
    k12 = convex_drawing(complete_graph(12))
    for fast in (True, False):
        t = time.perf_counter()
        r = search_fig8_in_K12(k12, fast=fast)
        assert time.perf_counter() - t < 30 * 60
        f = restrict_to_cycle(k12, r.witness.cycle)
        assert len(r.witness.cycle) == 12
        assert verify_injection(chord_diagram(f), C2, r.witness.injection)
    assert r.method == "stream" and r.scanned < 10**5


FIGURE_VALUES = [
    ("k6_f1.json", "alpha", Fraction(1, 4)),
    ("k6_f2.json", "alpha", Fraction(3, 4)),
    ("k6_f3.json", "alpha", Fraction(5, 4)),
    ("k331_f1.json", "alpha", Fraction(3, 4)),
    ("k331_f2.json", "alpha", Fraction(1)),
    ("k5_f0.json", "d", 1),
]


@criterion(11, "hand-transcribed diagrams reproduce the stated alpha and d values")
def test_criterion_11_figures():
    present = [(name, kind, value) for name, kind, value in FIGURE_VALUES if (FIXTURES / name).exists()]
    if not present:
        pytest.skip("no transcribed fixtures in fixtures/")
    for name, kind, value in present:
        d = ImmersedDiagram.loads(Path(FIXTURES / name).read_text())
        assert validate(d).ok, name
        assert (alpha(d) if kind == "alpha" else d_value(d)) == value, name
