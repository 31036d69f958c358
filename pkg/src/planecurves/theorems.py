"""Executable forms of the forcing, congruence, parity and detection results.

Every witness returned here is re-checked through public operations before it
is handed out.  When a search that must succeed comes back empty, a
``TheoremViolation`` is raised with the full trace: it means either a bug or a
counterexample, and both deserve to be kept.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import os
import random
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterator, Sequence

import numpy as np

from .curves import C1, C2, ChordDiagram, PlaneCurve, contains_subchord, r1_reducible, verify_injection
from .diagram import ImmersedDiagram, PlanarMap, restrict_to_cycle
from .graphs import Cycle, Graph, iter_cycles
from .knots import (
    DEFAULT_MAX_CROSSINGS,
    KnotDiagram,
    ResolutionCapExceeded,
    _a2_table,
    _structure,
    a2,
    a2_avg,
    alpha,
    d_value,
    host_kind,
)
from .moves import MoveSite, apply_move, enumerate_moves, random_walk

CHECKPOINT_EVERY = 100_000


class TheoremViolation(RuntimeError):
    """A search guaranteed to succeed failed, or a witness failed re-checking."""

    def __init__(self, message: str, trace: dict | None = None):
        self.trace = trace or {}
        super().__init__(message)


class HostError(ValueError):
    """The diagram's graph is not the host the statement is about."""


def is_complete(g: Graph) -> bool:
    n = g.order
    return g.size == n * (n - 1) // 2


def _require_complete(g: Graph, n: int | None = None) -> None:
    if not is_complete(g) or (n is not None and g.order != n):
        want = f"K{n}" if n is not None else "a complete graph"
        raise HostError(f"host must be {want}, got {g.order} vertices and {g.size} edges")


# -- forcing a chord diagram in K_4n ------------------------------------------


@dataclass(frozen=True)
class ChordWitness:
    cycle: Cycle
    crossings: tuple[str, ...]  # the chosen crossing for each pattern chord, in label order
    injection: dict[int, int]  # pattern chord -> chord label of the restricted curve
    curve: PlaneCurve

    def to_json(self, g: Graph) -> dict:
        return {
            "cycle": self.cycle.names(g),
            "crossings": list(self.crossings),
            "injection": {str(k): v for k, v in sorted(self.injection.items())},
            "chord_diagram": list(self.curve.chord_diagram().word),
        }


def _ends(d: ImmersedDiagram) -> dict[str, tuple[int, int]]:
    return {xid: (x.first[0], x.second[0]) for xid, x in d.crossings.items()}


def _disjoint_crossings(d: ImmersedDiagram, ends, within: set[int]) -> list[tuple[str, int, int]]:
    """Crossings between two disjoint edges spanned by ``within``, sorted by edges."""
    g = d.graph
    out = []
    for xid, (e, f) in ends.items():
        if set(g.edges[e]) | set(g.edges[f]) <= within and g.edges_disjoint(e, f):
            out.append((xid, min(e, f), max(e, f)))
    return sorted(out, key=lambda t: (t[1], t[2], t[0]))


def force_chord_diagram(d: ImmersedDiagram, pat: ChordDiagram) -> ChordWitness:
    """Follow the K_4n argument to a cycle whose chord diagram contains ``pat``.

    Quintuples H_1, H_2, ... of vertices (consecutive ones sharing the vertex
    left over by the previous crossing) each carry a crossing between disjoint
    edges.  The last quintuple also contains an endpoint u of the previous
    gadget; if its crossing uses u, the two gadget edges at u become
    consecutive on the cycle.  The gadget edges are then strung together in
    the order the pattern prescribes.
    """
    g = d.graph
    n = pat.chords
    if n < 2:
        raise ValueError("the pattern needs at least two chords")
    _require_complete(g)
    if g.order < 4 * n:
        raise HostError(f"a {n}-chord pattern needs K{4 * n}, got K{g.order}")
    ends = _ends(d)
    trace: dict = {"quintuples": []}
    fresh = iter(range(g.order))
    gadgets: list[tuple[str, int, int]] = []
    leftover: set[int] = set()
    for _ in range(n - 1):
        h = leftover | {next(fresh) for _ in range(5 - len(leftover))}
        found = _disjoint_crossings(d, ends, h)
        trace["quintuples"].append({"vertices": sorted(g.vertices[v] for v in h), "candidates": len(found)})
        if not found:
            raise TheoremViolation("a K5 subgraph has no crossing between disjoint edges", trace)
        xid, e, f = found[0]
        gadgets.append((xid, e, f))
        leftover = h - set(g.edges[e]) - set(g.edges[f])
    base = leftover | {next(fresh) for _ in range(4 - len(leftover))}
    extra = list(fresh)  # vertices beyond K_4n join the cycle between gadgets
    _, pe, pf = gadgets[-1]
    for u in sorted(set(g.edges[pe]) | set(g.edges[pf])):
        h = base | {u}
        for xid, e, f in _disjoint_crossings(d, ends, h):
            used = set(g.edges[e]) | set(g.edges[f])
            if u in used and (pe in (e, f) or pf in (e, f)):
                continue
            witness = _assemble(d, pat, gadgets + [(xid, e, f)], u if u in used else None, sorted(base - used) + extra)
            if witness is not None:
                return witness
    trace["final"] = {"base": sorted(g.vertices[v] for v in base)}
    raise TheoremViolation("no final quintuple crossing led to a witness", trace)


def _assemble(d, pat, gadgets, u, spare) -> ChordWitness | None:
    g = d.graph
    n = len(gadgets)
    word = pat.word
    shared = None
    if u is not None:
        # the two gadget edges meeting at u
        shared = tuple(e for _, a, b in gadgets[-2:] for e in (a, b) if u in g.edges[e])
    for sigma in itertools.permutations(range(n)):
        for flips in itertools.product((0, 1), repeat=n):
            seen: set[int] = set()
            seq = []
            for lab in word:
                k = sigma[lab - 1]
                _, e, f = gadgets[k]
                first = lab not in seen
                seen.add(lab)
                seq.append(e if first != bool(flips[lab - 1]) else f)
            order = _orient(g, seq, shared, u)
            if order is None:
                continue
            # spare vertices go between two gadget edges, never inside the pair at u
            vertices = order[:2] + list(spare) + order[2:]
            gamma = Cycle(tuple(vertices))
            return _verified_witness(d, pat, gamma, {lab: gadgets[sigma[lab - 1]][0] for lab in range(1, n + 1)})
    return None


def _orient(g: Graph, seq: list[int], shared, u) -> list[int] | None:
    """Vertex order of a cycle running through ``seq`` (edges joined directly)."""
    m = len(seq)
    if shared is None:
        return [v for e in seq for v in g.edges[e]]
    i, j = (seq.index(e) for e in shared)
    if (i + 1) % m == j:
        start = j
    elif (j + 1) % m == i:
        start = i
    else:
        return None
    # the edges at u close the cycle: the last one ends at u, the first leaves it
    seq = seq[start:] + seq[:start]
    out = [u]
    for e in seq[:-1]:
        a, b = g.edges[e]
        out.extend((b,) if a == u else (a,) if b == u else (a, b))
    a, b = g.edges[seq[-1]]
    out.append(a if b == u else b)
    return out


def _verified_witness(d, pat, gamma: Cycle, chosen: dict[int, str]) -> ChordWitness:
    curve = restrict_to_cycle(d, gamma)
    label = {x: i + 1 for i, x in enumerate(curve.labels())}
    big = curve.chord_diagram()
    injection = {lab: label[x] for lab, x in chosen.items() if x in label}
    if not verify_injection(big, pat, injection) or contains_subchord(big, pat) is None:
        raise TheoremViolation(
            "assembled cycle does not carry the pattern",
            {"cycle": gamma.names(d.graph), "chosen": chosen, "diagram": list(big.word)},
        )
    return ChordWitness(gamma, tuple(chosen[k] for k in sorted(chosen)), injection, curve)


# -- the alpha congruence and the parity of d ---------------------------------


def check_alpha_congruence(
    d: ImmersedDiagram, max_crossings: int = DEFAULT_MAX_CROSSINGS, method: str = "enumerate"
) -> tuple[Fraction, bool]:
    """alpha(f) and whether 4 alpha(f) is odd."""
    _require_complete(d.graph, 6)
    a = alpha(d, 6, max_crossings, method)
    four = 4 * a
    return a, four.denominator == 1 and four.numerator % 2 == 1


def check_d_parity(d: ImmersedDiagram) -> tuple[int, bool]:
    if host_kind(d.graph) is None:
        raise HostError("d(f) parity applies to K5 and K3,3 hosts only")
    value = d_value(d)
    return value, value % 2 == 1


# -- a nontrivial knot over some 6-cycle --------------------------------------


@dataclass(frozen=True)
class KnotWitness:
    cycle: Cycle
    knot: KnotDiagram
    a2: int

    def to_json(self, g: Graph) -> dict:
        return {"cycle": self.cycle.names(g), "knot": self.knot.to_json(), "a2": self.a2}


def first_nonzero_resolution(f: PlaneCurve, max_crossings: int = DEFAULT_MAX_CROSSINGS) -> KnotDiagram | None:
    c = f.crossing_count
    if c == 0 or r1_reducible(f):
        return None
    if c > max_crossings:
        raise ResolutionCapExceeded(c, max_crossings)
    labels = f.labels()
    structure = _structure(f)
    for start in range(0, 1 << c, 1 << 12):
        masks = np.arange(start, min(start + (1 << 12), 1 << c), dtype=np.int64)
        values = _a2_table(f, masks, structure)
        hits = np.flatnonzero(values)
        if hits.size:
            mask = int(masks[hits[0]])
            return KnotDiagram(f, {x: (mask >> i) & 1 for i, x in enumerate(labels)})
    return None


def find_nontrivial_projection(d: ImmersedDiagram, max_crossings: int = DEFAULT_MAX_CROSSINGS) -> KnotWitness:
    """The first Hamiltonian cycle (canonical order) lifting to a knot with a2 != 0."""
    g = d.graph
    _require_complete(g, 6)
    skipped = []
    for gamma in iter_cycles(g, g.order):
        f = restrict_to_cycle(d, gamma)
        try:
            k = first_nonzero_resolution(f, max_crossings)
        except ResolutionCapExceeded:
            skipped.append(gamma.names(g))
            continue
        if k is not None:
            value = a2(k)
            if value == 0:
                raise TheoremViolation("batch and scalar a2 disagree", {"cycle": gamma.names(g)})
            return KnotWitness(gamma, k, value)
    if skipped:
        raise ResolutionCapExceeded(max_crossings + 1, max_crossings, f"{len(skipped)} cycles over the cap")
    raise TheoremViolation("no 6-cycle lifts to a knot with a2 != 0")


# -- detecting trefoil and figure-eight projections ---------------------------


KNOT_PATTERNS = {"trefoil": "C1", "fig8": "C2", "figure-eight": "C2"}


def pattern_for(which: str, patterns: dict[str, ChordDiagram] | None = None) -> ChordDiagram:
    try:
        key = KNOT_PATTERNS[which]
    except KeyError:
        raise ValueError(f"unknown knot {which!r}; use trefoil or fig8") from None
    presets = {"C1": C1, "C2": C2}
    if patterns:
        presets.update(patterns)
    return presets[key]


def detect_projection(
    f: PlaneCurve, which: str, pattern: ChordDiagram | None = None
) -> tuple[bool, dict[int, int] | None]:
    pat = pattern if pattern is not None else pattern_for(which)
    hit = contains_subchord(f.chord_diagram(), pat)
    return hit is not None, hit


# -- a figure-eight projection inside K12 -------------------------------------


def _edge_words(d: ImmersedDiagram) -> dict[tuple[int, int], tuple[str, ...]]:
    g = d.graph
    out = {}
    for e, (a, b) in enumerate(g.edges):
        out[(a, b)] = d.traversals[e]
        out[(b, a)] = d.traversals[e][::-1]
    return out


def _cycle_word(words, vs: Sequence[int]) -> tuple[str, ...]:
    seq: list[str] = []
    for i, u in enumerate(vs):
        seq.extend(words[(u, vs[(i + 1) % len(vs)])])
    counts = Counter(seq)
    return tuple(x for x in seq if counts[x] == 2)


def _scan(d: ImmersedDiagram, pat: ChordDiagram, prefix: tuple[int, ...], after, every: int, on_progress):
    words = _edge_words(d)
    n = d.graph.order
    count = 0
    for gamma in iter_cycles(d.graph, n, start_after=after, prefix=prefix):
        count += 1
        word = _cycle_word(words, gamma.vertices)
        if len(word) >= 2 * pat.chords and contains_subchord(ChordDiagram(word), pat) is not None:
            return gamma, count
        if on_progress is not None and count % every == 0:
            on_progress(prefix, gamma, count)
    return None, count


def _scan_task(args):
    d_json, word, prefix = args
    d = ImmersedDiagram.from_json(d_json)
    gamma, count = _scan(d, ChordDiagram(word), prefix, None, CHECKPOINT_EVERY, None)
    return prefix, (gamma.vertices if gamma else None), count


def home_dir() -> Path:
    return Path(os.environ.get("PLANECURVES_HOME", Path.home() / ".planecurves"))


def diagram_digest(d: ImmersedDiagram) -> str:
    return hashlib.sha256(d.dumps().encode()).hexdigest()[:16]


@dataclass
class SearchResult:
    witness: ChordWitness
    method: str
    scanned: int = 0
    tasks: list = field(default_factory=list)

    def to_json(self, g: Graph) -> dict:
        data = self.witness.to_json(g)
        data.update({"method": self.method, "scanned": self.scanned})
        return data


def _tasks(n: int) -> list[tuple[int, int, int]]:
    return [(0, a, b) for a in range(1, n) for b in range(1, n) if a != b]


def search_fig8_in_K12(
    d: ImmersedDiagram,
    pattern: ChordDiagram | None = None,
    fast: bool = True,
    jobs: int = 1,
    checkpoint: str | Path | None = None,
    resume: str | Path | None = None,
    every: int = CHECKPOINT_EVERY,
) -> SearchResult:
    """A 12-cycle whose curve contains the figure-eight pattern.

    With ``fast`` and a pattern of at most three chords the K_4n procedure
    answers directly.  Otherwise Hamiltonian cycles are streamed in canonical
    order, split into tasks by their first three vertices; the earliest task
    holding a witness wins, so the answer does not depend on ``jobs``.
    """
    g = d.graph
    _require_complete(g, 12)
    pat = pattern if pattern is not None else C2
    if fast and 4 * pat.chords <= g.order and pat.chords >= 2:
        return SearchResult(force_chord_diagram(d, pat), "forcing")
    digest = diagram_digest(d)
    state = {"diagram": digest, "pattern": list(pat.word), "done": [], "current": None, "scanned": 0}
    if resume is not None:
        state = json.loads(Path(resume).read_text())
        if state.get("diagram") != digest or state.get("pattern") != list(pat.word):
            raise ValueError("checkpoint belongs to a different diagram or pattern")
    if checkpoint is None and resume is not None:
        checkpoint = resume
    ckpt = Path(checkpoint) if checkpoint is not None else None

    def save() -> None:
        if ckpt is not None:
            ckpt.parent.mkdir(parents=True, exist_ok=True)
            tmp = ckpt.with_suffix(".tmp")
            tmp.write_text(json.dumps(state, sort_keys=True))
            tmp.replace(ckpt)

    done = {tuple(t) for t in state["done"]}
    todo = [t for t in _tasks(g.order) if t not in done]
    found = None
    if jobs <= 1:
        for prefix in todo:
            cur = state.get("current")
            after = tuple(cur["after"]) if cur and tuple(cur["prefix"]) == prefix else None
            base = state["scanned"]

            def progress(pfx, gamma, count, _base=base):
                state["current"] = {"prefix": list(pfx), "after": list(gamma.vertices)}
                state["scanned"] = _base + count
                save()

            gamma, count = _scan(d, pat, prefix, after, every, progress)
            state["scanned"] = base + count
            if gamma is not None:
                found = gamma
                break
            state["done"].append(list(prefix))
            state["current"] = None
            save()
    else:
        d_json = d.to_json()
        base = state["scanned"]
        results: dict[tuple, tuple] = {}
        pool = ProcessPoolExecutor(max_workers=jobs)
        try:
            futures = [pool.submit(_scan_task, (d_json, pat.word, p)) for p in todo]
            for fut in _as_completed(futures):
                prefix, vs, count = fut.result()
                results[prefix] = (vs, count)
                if vs is None:
                    state["done"].append(list(prefix))
                    save()
                # stop once every earlier task has reported and one holds a witness
                total = base
                for p in todo:
                    if p not in results:
                        break
                    total += results[p][1]
                    if results[p][0] is not None:
                        found = Cycle(tuple(results[p][0]))
                        break
                if found is not None:
                    state["scanned"] = total
                    break
        finally:
            pool.shutdown(wait=True, cancel_futures=True)
    if found is None:
        raise TheoremViolation("no Hamiltonian cycle of K12 carries the figure-eight pattern", state)
    f_word = restrict_to_cycle(d, found)
    hit = contains_subchord(f_word.chord_diagram(), pat)
    if hit is None or not verify_injection(f_word.chord_diagram(), pat, hit):
        raise TheoremViolation("streamed witness failed re-checking", {"cycle": found.names(g)})
    labels = f_word.labels()
    chosen = tuple(labels[hit[k] - 1] for k in sorted(hit))
    return SearchResult(ChordWitness(found, chosen, hit, f_word), "stream", state["scanned"])


def _as_completed(futures) -> Iterator:
    from concurrent.futures import as_completed

    return as_completed(futures)


# -- averaged a2 under the local curve moves ----------------------------------


MOVE_CASES = ("R1", "R2 opposite", "R2 parallel", "R3 coherent", "R3 mixed")
EXPECTED_DELTA = {
    "R1": Fraction(0),
    "R2 opposite": Fraction(0),
    "R2 parallel": Fraction(1, 4),
    "R3 coherent": Fraction(1, 4),
    "R3 mixed": Fraction(1, 4),
}


def _curve_of(d: ImmersedDiagram) -> PlaneCurve:
    return restrict_to_cycle(d, Cycle(tuple(range(d.graph.order))))


def _along(d: ImmersedDiagram, e: int) -> bool:
    """Whether edge e of the host cycle is listed in the curve's direction."""
    return e != d.graph.order - 1


def _curve_position(d: ImmersedDiagram, e: int, j: int) -> tuple[int, int]:
    return (e, j) if _along(d, e) else (e, len(d.traversals[e]) - j)


def _triangle_sign(d: ImmersedDiagram, m: PlanarMap, face) -> tuple[int, bool]:
    """Sign of the trigon as a vanishing triangle, and whether it is coherent.

    The sides, visited in curve order, orient the triangle's boundary; q counts
    the sides whose curve direction agrees with that orientation and the sign
    is (-1)^q.
    """
    sides = [m.segment(dart) for dart in face]
    with_face = [(dart & 1 == 0) == _along(d, m.segment(dart)[0]) for dart in face]
    visit = sorted(range(3), key=lambda i: _curve_position(d, *sides[i]))
    same_turn = any(visit[k:] + visit[:k] == [0, 1, 2] for k in range(3))
    agree = [w if same_turn else not w for w in with_face]
    q = sum(agree)
    coherent = all(with_face) or not any(with_face)
    return (-1) ** q, coherent


def classify_curve_move(d: ImmersedDiagram, s: MoveSite) -> str | None:
    """Which local curve move a site performs on a cycle-graph host, if any."""
    if s.kind == "R1+":
        return "R1"
    if s.kind == "R2+":
        (ea, _, enda), (eb, _, endb) = s.data
        a_with = (enda == 0) == _along(d, ea)
        b_with = (endb == 0) == _along(d, eb)
        return "R2 opposite" if a_with == b_with else "R2 parallel"
    if s.kind == "R3":
        m = PlanarMap(d)
        from .moves import _r3_face

        _, coherent = _triangle_sign(d, m, _r3_face(m, s.data))
        return "R3 coherent" if coherent else "R3 mixed"
    return None


def move_delta(d: ImmersedDiagram, s: MoveSite, max_crossings: int = DEFAULT_MAX_CROSSINGS) -> tuple[str, Fraction]:
    """(case, a2(f) - a2(g)) for the pair (f, g) that the site relates.

    For R1/R2, f is the side with more crossings.  For R3, f is the side whose
    vanishing triangle is positive.
    """
    case = classify_curve_move(d, s)
    if case is None:
        raise ValueError(f"{s.kind} is not a curve move")
    after = apply_move(d, s, check=False)
    before_avg = a2_avg(_curve_of(d), max_crossings)
    after_avg = a2_avg(_curve_of(after), max_crossings)
    if s.kind != "R3":
        return case, after_avg - before_avg
    from .moves import _r3_face

    m = PlanarMap(d)
    sign, _ = _triangle_sign(d, m, _r3_face(m, s.data))
    return case, (before_avg - after_avg) if sign > 0 else (after_avg - before_avg)


def random_host_curve(seed: int, steps: int = 30, max_crossings: int = 10) -> ImmersedDiagram:
    """A triangle-graph diagram made by a seeded walk from the embedded circle."""
    from .diagram import convex_drawing
    from .graphs import cycle_graph

    return random_walk(convex_drawing(cycle_graph(3)), steps, seed, max_crossings, kinds=("R1+", "R1-", "R2+", "R2-", "R3"))


def move_delta_cases(hosts: int = 20, seed: int = 0) -> dict[str, list[Fraction]]:
    """For each case, the delta on ``hosts`` random host curves."""
    rng = random.Random(seed)
    out: dict[str, list[Fraction]] = {c: [] for c in MOVE_CASES}
    attempts = 0
    while any(len(v) < hosts for v in out.values()):
        attempts += 1
        if attempts > 200 * hosts:
            raise RuntimeError("could not find enough move sites")
        d = random_host_curve(rng.randrange(2**31))
        by_case: dict[str, list[MoveSite]] = {}
        for s in enumerate_moves(d, ("R1+", "R2+", "R3")):
            case = classify_curve_move(d, s)
            if case is not None:
                by_case.setdefault(case, []).append(s)
        for case, sites in sorted(by_case.items()):
            if len(out[case]) < hosts:
                out[case].append(move_delta(d, rng.choice(sites))[1])
    return out
