"""Local moves R1-R5 on immersed graph diagrams.

Sites name darts as ``(edge, segment, end)``: segment j of an edge lies before
its j-th crossing, and end 0 walks it in the edge's listed direction.

* R1+/R1-: add a kink on one side of a segment / remove a monogon.
* R2+/R2-: push one boundary segment of a face across another / remove a bigon.
* R3: pass a strand across the opposite corner of a trigon.
* R4+/R4-: sweep a strand across a graph vertex of degree k, creating or
  removing k crossings, one per incident edge.
* R5+/R5-: twist two rotation-adjacent edge-ends at a vertex, creating or
  removing one crossing between them.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from ._maps import L, R
from .diagram import (
    Crossing,
    DiagramError,
    ImmersedDiagram,
    PlanarMap,
    fresh_crossing_ids,
)

KINDS = ("R1+", "R1-", "R2+", "R2-", "R3", "R4+", "R4-", "R5+", "R5-")


class StaleMoveError(DiagramError):
    """The site does not describe an applicable move on this diagram."""


@dataclass(frozen=True)
class MoveSite:
    kind: str
    data: tuple

    def to_json(self) -> dict:
        return {"kind": self.kind, "data": _plain(self.data)}


def _plain(x):
    return [_plain(y) for y in x] if isinstance(x, tuple) else x


def _dart_key(m: PlanarMap, dart: int) -> tuple[int, int, int]:
    e, j = m.segment(dart)
    return (e, j, dart & 1)


def _dart(m: PlanarMap, key: tuple[int, int, int]) -> int:
    e, j, end = key
    return m.tail(e, j) + end


class _Edit:
    """Mutable copy: traversal entries are (crossing id, slot) pairs."""

    def __init__(self, d: ImmersedDiagram):
        self.g = d.graph
        self.rot = [list(r) for r in d.rotations]
        slot_at = d.slot_at
        self.trav = [[(x, slot_at[e][i]) for i, x in enumerate(t)] for e, t in enumerate(d.traversals)]
        self.hand = {x: c.hand for x, c in d.crossings.items()}

    def remove(self, xids) -> None:
        xids = set(xids)
        self.trav = [[p for p in t if p[0] not in xids] for t in self.trav]
        for x in xids:
            del self.hand[x]

    def insert(self, items) -> None:
        """``items``: (edge, index, entries); positions refer to the original lists."""
        for e, i, entries in sorted(items, key=lambda it: (it[0], it[1]), reverse=True):
            self.trav[e][i:i] = entries

    def build(self) -> ImmersedDiagram:
        slots: dict[str, list] = {x: [None, None] for x in self.hand}
        for e, t in enumerate(self.trav):
            for i, (x, s) in enumerate(t):
                slots[x][s] = (e, i)
        crossings = {x: Crossing(slots[x][0], slots[x][1], self.hand[x]) for x in self.hand}
        return ImmersedDiagram(
            self.g,
            tuple(tuple(r) for r in self.rot),
            tuple(tuple(x for x, _ in t) for t in self.trav),
            crossings,
        )


# -- enumeration --------------------------------------------------------------


def _near(d: ImmersedDiagram, e: int, v: int) -> int:
    """Traversal index next to endpoint v of edge e (insertion point)."""
    return 0 if d.graph.edges[e][0] == v else len(d.traversals[e])


def _outward(d: ImmersedDiagram, e: int, v: int) -> int:
    return 1 if d.graph.edges[e][0] == v else -1


def _sites_r1(d, m) -> tuple[list, list]:
    plus, minus = [], []
    for s in range(len(m.seg_edge)):
        for end in (0, 1):
            plus.append(MoveSite("R1+", _dart_key(m, 2 * s + end)))
    for face in m.faces:
        if len(face) == 1:
            kind, x = m.node(face[0])
            if kind == "x" and m.node(face[0] ^ 1) == (kind, x):
                minus.append(MoveSite("R1-", (x,)))
    return plus, minus


def _sites_r2(d, m) -> tuple[list, list]:
    plus, minus = [], []
    for face in m.faces:
        for a in range(len(face)):
            for b in range(a + 1, len(face)):
                da, db = face[a], face[b]
                if da >> 1 != db >> 1:
                    plus.append(MoveSite("R2+", tuple(sorted((_dart_key(m, da), _dart_key(m, db))))))
        if len(face) == 2:
            p, q = m.node(face[0]), m.node(face[1])
            if p[0] == q[0] == "x" and p != q:
                minus.append(MoveSite("R2-", tuple(sorted((p[1], q[1])))))
    return plus, sorted(set(minus), key=lambda s: s.data)


def _trigon_ok(m: PlanarMap, face) -> bool:
    nodes = [m.node(dart) for dart in face]
    if any(n[0] != "x" for n in nodes) or len(set(nodes)) != 3:
        return False
    segs = [m.segment(dart) for dart in face]
    if len(set(segs)) != 3:
        return False
    # the three swaps must touch disjoint traversal slots
    touched = set()
    for e, j in segs:
        for slot in ((e, j - 1), (e, j)):
            if slot in touched:
                return False
            touched.add(slot)
    return True


def _sites_r3(d, m) -> list:
    out = set()
    for face in m.faces:
        if len(face) == 3 and _trigon_ok(m, face):
            out.add(MoveSite("R3", tuple(sorted(m.node(dart)[1] for dart in face))))
    return sorted(out, key=lambda s: s.data)


def _r3_face(m: PlanarMap, xs: tuple) -> list[int] | None:
    want = set(xs)
    for face in m.faces:
        if len(face) == 3 and {m.node(dart)[1] for dart in face} == want and _trigon_ok(m, face):
            return face
    return None


def _sites_r4(d, m) -> tuple[list, list]:
    plus, minus = [], []
    for face in m.faces:
        for k, dv in enumerate(face):
            kind, v = m.node(dv)
            if kind != "v":
                continue
            pos = d.rotations[v].index(m.segment(dv)[0])
            for ds in face:
                if m.node(ds) != ("v", v) and m.node(ds ^ 1) != ("v", v):
                    plus.append(MoveSite("R4+", (v, pos, _dart_key(m, ds))))
    for v in range(d.graph.order):
        found = _r4_minus(d, m, v)
        if found is not None:
            minus.append(MoveSite("R4-", (v,) + found))
    return sorted(set(plus), key=lambda s: s.data), minus


def _r4_minus(d: ImmersedDiagram, m: PlanarMap, v: int) -> tuple | None:
    """Crossings (in rotation order) of a strand wrapped tightly around v."""
    rot = d.rotations[v]
    k = len(rot)
    if k == 0:
        return None
    darts = [m.vertex_dart(e, v) for e in rot]
    near = []
    for dv in darts:
        kind, x = m.node(dv ^ 1)
        if kind != "x":
            return None
        near.append(x)
    if len(set(near)) != k:
        return None
    tri = []
    for i in range(k):
        face = m.faces[m.face_of[darts[(i + 1) % k]]]
        if len(face) != 3:
            tri.append(False)
            continue
        r = face.index(darts[(i + 1) % k])
        face = face[r:] + face[:r]
        tri.append(m.node(face[1]) == ("x", near[(i + 1) % k]) and m.node(face[2]) == ("x", near[i]))
    if k == 1:
        start = 0
    else:
        gaps = [i for i in range(k) if not tri[i]]
        if len(gaps) != 1:
            return None
        start = (gaps[0] + 1) % k
    return tuple(near[(start + i) % k] for i in range(k))


def _sites_r5(d, m) -> tuple[list, list]:
    plus, minus = [], []
    for v, rot in enumerate(d.rotations):
        k = len(rot)
        if k < 2:
            continue
        for i in range(k):
            plus.append(MoveSite("R5+", (v, i)))
            if _r5_minus_ok(d, m, v, i):
                minus.append(MoveSite("R5-", (v, i)))
    return plus, minus


def _r5_minus_ok(d: ImmersedDiagram, m: PlanarMap, v: int, i: int) -> bool:
    rot = d.rotations[v]
    k = len(rot)
    ea, eb = rot[i], rot[(i + 1) % k]
    da, db = m.vertex_dart(ea, v), m.vertex_dart(eb, v)
    na, nb = m.node(da ^ 1), m.node(db ^ 1)
    if na[0] != "x" or na != nb:
        return False
    face = m.faces[m.face_of[db]]
    return len(face) == 2 and da ^ 1 in face


def enumerate_moves(d: ImmersedDiagram, kinds=KINDS) -> list[MoveSite]:
    """Every applicable site, in a deterministic order grouped by kind."""
    m = PlanarMap(d)
    found: dict[str, list] = {}
    found["R1+"], found["R1-"] = _sites_r1(d, m)
    found["R2+"], found["R2-"] = _sites_r2(d, m)
    found["R3"] = _sites_r3(d, m)
    found["R4+"], found["R4-"] = _sites_r4(d, m)
    found["R5+"], found["R5-"] = _sites_r5(d, m)
    return [s for kind in KINDS if kind in kinds for s in found[kind]]


def crossing_delta(d: ImmersedDiagram, s: MoveSite) -> int:
    if s.kind in ("R1+", "R5+"):
        return 1
    if s.kind in ("R1-", "R5-"):
        return -1
    if s.kind == "R2+":
        return 2
    if s.kind == "R2-":
        return -2
    if s.kind == "R4+":
        return d.graph.degree(s.data[0])
    if s.kind == "R4-":
        return -(len(s.data) - 1)
    return 0


# -- application --------------------------------------------------------------


def apply_move(d: ImmersedDiagram, s: MoveSite, check: bool = True) -> ImmersedDiagram:
    """The diagram after the move; raises StaleMoveError for a foreign site."""
    if check and s not in enumerate_moves(d, kinds=(s.kind,)):
        raise StaleMoveError(f"{s.kind} site {s.data!r} does not apply to this diagram")
    m = PlanarMap(d)
    ed = _Edit(d)
    kind = s.kind
    if kind == "R1+":
        e, j, end = s.data
        (x,) = fresh_crossing_ids(d, 1)
        ed.hand[x] = R
        ed.insert([(e, j, [(x, 0), (x, 1)] if end == 0 else [(x, 1), (x, 0)])])
    elif kind in ("R1-", "R2-"):
        ed.remove(s.data)
    elif kind == "R2+":
        _apply_r2(d, m, ed, *s.data)
    elif kind == "R3":
        face = _r3_face(m, s.data)
        if face is None:
            raise StaleMoveError(f"no trigon on crossings {s.data!r}")
        for dart in face:
            e, j = m.segment(dart)
            ed.trav[e][j - 1], ed.trav[e][j] = ed.trav[e][j], ed.trav[e][j - 1]
    elif kind == "R4+":
        _apply_r4(d, m, ed, *s.data)
    elif kind == "R4-":
        ed.remove(s.data[1:])
    elif kind == "R5+":
        _apply_r5(d, ed, *s.data)
    elif kind == "R5-":
        v, i = s.data
        rot = d.rotations[v]
        k = len(rot)
        x = m.node(m.vertex_dart(rot[i], v) ^ 1)[1]
        ed.remove([x])
        ed.rot[v][i], ed.rot[v][(i + 1) % k] = rot[(i + 1) % k], rot[i]
    else:
        raise StaleMoveError(f"unknown move kind {kind!r}")
    return ed.build()


def _apply_r2(d, m, ed, ka, kb) -> None:
    x, y = fresh_crossing_ids(d, 2)
    (ea, ja, enda), (eb, jb, endb) = ka, kb
    # walking A meets x then y; walking B meets y then x
    ed.hand[x] = L * (-1 if enda else 1) * (-1 if endb else 1)
    ed.hand[y] = R * (-1 if enda else 1) * (-1 if endb else 1)
    a_entries = [(x, 0), (y, 0)]
    b_entries = [(y, 1), (x, 1)]
    if enda:
        a_entries.reverse()
    if endb:
        b_entries.reverse()
    ed.insert([(ea, ja, a_entries), (eb, jb, b_entries)])


def _apply_r4(d, m, ed, v, pos, key) -> None:
    rot = d.rotations[v]
    k = len(rot)
    e, j, end = key
    # the strand circles v counterclockwise, starting with the edge that closes the corner
    order = [rot[(pos + i) % k] for i in range(k)]
    xs = fresh_crossing_ids(d, k)
    strand = []
    items = []
    for x, ev in zip(xs, order):
        ed.hand[x] = L * (-1 if end else 1) * _outward(d, ev, v)
        strand.append((x, 0))
        items.append((ev, _near(d, ev, v), [(x, 1)]))
    if end:
        strand.reverse()
    items.append((e, j, strand))
    # several insertions may land on one edge; apply from the highest index down
    by_edge: dict[tuple[int, int], list] = {}
    for ev, i, entries in items:
        by_edge.setdefault((ev, i), []).extend(entries)
    ed.insert([(ev, i, entries) for (ev, i), entries in by_edge.items()])


def _apply_r5(d, ed, v, i) -> None:
    rot = d.rotations[v]
    k = len(rot)
    ea, eb = rot[i], rot[(i + 1) % k]
    (x,) = fresh_crossing_ids(d, 1)
    ed.hand[x] = R * _outward(d, ea, v) * _outward(d, eb, v)
    ed.rot[v][i], ed.rot[v][(i + 1) % k] = eb, ea
    ed.insert([(ea, _near(d, ea, v), [(x, 0)]), (eb, _near(d, eb, v), [(x, 1)])])


def random_walk(
    d: ImmersedDiagram,
    steps: int,
    seed: int,
    max_crossings: int | None = None,
    kinds=KINDS,
) -> ImmersedDiagram:
    """``steps`` moves, each drawn uniformly from the sites that respect the cap.

    Moves that do not add crossings are always allowed, so a diagram already
    above the cap can still move.
    """
    rng = random.Random(seed)
    for _ in range(steps):
        sites = enumerate_moves(d, kinds)
        if max_crossings is not None:
            c = d.crossing_count
            sites = [s for s in sites if crossing_delta(d, s) <= 0 or c + crossing_delta(d, s) <= max_crossings]
        if not sites:
            continue
        d = apply_move(d, rng.choice(sites), check=False)
    return d
