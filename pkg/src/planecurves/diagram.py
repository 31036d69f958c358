"""Generic immersions of graphs in the plane as combinatorial maps.

A diagram stores, for every vertex, the counterclockwise order of its edge-ends;
for every edge, the crossings met walking from endpoint 0 to endpoint 1; and
for every crossing, its two passages (``first``/``second`` slots) plus a
handedness bit.  Handedness L means: walking the first passage in its edge's
listed direction, the second strand crosses from left to right.  Realizability
is the genus-0 condition on the induced 4-valent map.
"""

from __future__ import annotations

import functools
import itertools
import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from ._maps import HAND_NAMES, HAND_VALUES, L, R, crossing_order, set_cyclic, trace_faces
from .curves import PlaneCurve
from .graphs import Cycle, Graph, GraphError, canonical_rotation


class DiagramFormatError(ValueError):
    """Input that cannot be read as a diagram at all."""


class DiagramError(ValueError):
    pass


@dataclass(frozen=True)
class Crossing:
    first: tuple[int, int]  # (edge index, occurrence index)
    second: tuple[int, int]
    hand: int  # L = -1, R = +1; 0 marks an unreadable value

    def slot(self, which: int) -> tuple[int, int]:
        return self.second if which else self.first


@dataclass(frozen=True)
class ImmersedDiagram:
    graph: Graph
    rotations: tuple[tuple[int, ...], ...]
    traversals: tuple[tuple[str, ...], ...]
    crossings: Mapping[str, Crossing]

    def __post_init__(self) -> None:
        object.__setattr__(self, "rotations", tuple(tuple(r) for r in self.rotations))
        object.__setattr__(self, "traversals", tuple(tuple(t) for t in self.traversals))
        object.__setattr__(self, "crossings", dict(self.crossings))

    @property
    def crossing_count(self) -> int:
        return len(self.crossings)

    @functools.cached_property
    def slot_at(self) -> tuple[tuple[int, ...], ...]:
        """``slot_at[e][i]`` is 0 or 1: which slot of its crossing sits at (e, i)."""
        out = [[0] * len(t) for t in self.traversals]
        for x in self.crossings.values():
            e, i = x.second
            out[e][i] = 1
        return tuple(tuple(r) for r in out)

    def to_json(self) -> dict:
        g = self.graph
        rotations = {}
        for v, rot in enumerate(self.rotations):
            rot = list(rot)
            if rot:
                k = rot.index(min(rot))
                rot = rot[k:] + rot[:k]
            rotations[g.vertices[v]] = [g.edge_names[e] for e in rot]
        return {
            "graph": g.to_json(),
            "rotations": rotations,
            "traversals": {g.edge_names[e]: list(t) for e, t in enumerate(self.traversals)},
            "crossings": {
                xid: {
                    "first": [g.edge_names[x.first[0]], x.first[1]],
                    "second": [g.edge_names[x.second[0]], x.second[1]],
                    "handedness": HAND_NAMES.get(x.hand, "?"),
                }
                for xid, x in self.crossings.items()
            },
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=2) + "\n"

    @classmethod
    def from_json(cls, data: Mapping) -> ImmersedDiagram:
        if not isinstance(data, Mapping):
            raise DiagramFormatError("diagram must be a JSON object")
        missing = [k for k in ("graph", "rotations", "traversals", "crossings") if k not in data]
        if missing:
            raise DiagramFormatError(f"missing keys: {', '.join(missing)}")
        try:
            g = Graph.from_json(data["graph"])
        except GraphError as exc:
            raise DiagramFormatError(str(exc)) from None

        def edge(name) -> int:
            try:
                return g.edge_index(str(name))
            except GraphError as exc:
                raise DiagramFormatError(str(exc)) from None

        try:
            rotations: list[tuple[int, ...]] = [() for _ in range(g.order)]
            for vname, ends in data["rotations"].items():
                try:
                    v = g.vertex_index(str(vname))
                except GraphError as exc:
                    raise DiagramFormatError(str(exc)) from None
                rotations[v] = tuple(edge(e) for e in ends)
            traversals: list[tuple[str, ...]] = [() for _ in range(g.size)]
            for ename, xs in data["traversals"].items():
                traversals[edge(ename)] = tuple(str(x) for x in xs)
            crossings = {}
            for xid, rec in data["crossings"].items():
                first = (edge(rec["first"][0]), int(rec["first"][1]))
                second = (edge(rec["second"][0]), int(rec["second"][1]))
                hand = HAND_VALUES.get(str(rec.get("handedness", "")).upper(), 0)
                crossings[str(xid)] = Crossing(first, second, hand)
        except (AttributeError, TypeError, KeyError, IndexError, ValueError) as exc:
            if isinstance(exc, DiagramFormatError):
                raise
            raise DiagramFormatError(f"malformed diagram: {exc!r}") from None
        return cls(g, tuple(rotations), tuple(traversals), crossings)

    @classmethod
    def loads(cls, text: str) -> ImmersedDiagram:
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise DiagramFormatError(f"not JSON: {exc}") from None
        return cls.from_json(data)


def crossing_count(d: ImmersedDiagram) -> int:
    """c(f): the number of crossing points."""
    return d.crossing_count


# -- the 4-valent map ---------------------------------------------------------


class PlanarMap:
    """Darts, rotations and faces of the map made of graph vertices and crossings.

    Segment ``(e, j)`` is the piece of edge ``e`` before its j-th crossing
    (j = 0 .. k_e).  Dart end 0 sits at the segment's tail (walking it goes
    with the listed direction), end 1 at its head.
    """

    def __init__(self, d: ImmersedDiagram):
        self.d = d
        g = d.graph
        self.base = []
        self.seg_edge: list[int] = []
        self.seg_pos: list[int] = []
        for e, trav in enumerate(d.traversals):
            self.base.append(len(self.seg_edge))
            for j in range(len(trav) + 1):
                self.seg_edge.append(e)
                self.seg_pos.append(j)
        nd = 2 * len(self.seg_edge)
        self.sigma = [0] * nd
        for v, rot in enumerate(d.rotations):
            ring = [self.vertex_dart(e, v) for e in rot]
            if ring:
                set_cyclic(self.sigma, ring)
        for x in d.crossings.values():
            (e1, i1), (e2, i2) = x.first, x.second
            set_cyclic(
                self.sigma,
                crossing_order(x.hand, self.tail(e1, i1 + 1), self.head(e1, i1), self.tail(e2, i2 + 1), self.head(e2, i2)),
            )
        self.faces = trace_faces(self.sigma)
        self.face_of = [0] * nd
        for k, face in enumerate(self.faces):
            for dart in face:
                self.face_of[dart] = k
        self._g = g

    def tail(self, e: int, j: int) -> int:
        return 2 * (self.base[e] + j)

    def head(self, e: int, j: int) -> int:
        return 2 * (self.base[e] + j) + 1

    def vertex_dart(self, e: int, v: int) -> int:
        """The dart of edge ``e`` at its endpoint ``v``, pointing away from v."""
        a, b = self.d.graph.edges[e]
        if v == a:
            return self.tail(e, 0)
        if v == b:
            return self.head(e, len(self.d.traversals[e]))
        raise DiagramError(f"edge {e} is not incident to vertex {v}")

    def segment(self, dart: int) -> tuple[int, int]:
        s = dart >> 1
        return self.seg_edge[s], self.seg_pos[s]

    def walks_forward(self, dart: int) -> bool:
        return dart & 1 == 0

    def node(self, dart: int) -> tuple[str, object]:
        """('v', vertex) or ('x', crossing id) at the dart's own end."""
        e, j = self.segment(dart)
        trav = self.d.traversals[e]
        if dart & 1 == 0:
            return ("v", self.d.graph.edges[e][0]) if j == 0 else ("x", trav[j - 1])
        return ("v", self.d.graph.edges[e][1]) if j == len(trav) else ("x", trav[j])

    def euler_by_component(self) -> list[tuple[int, int, int, int]]:
        """(V, E, F, genus) for each connected component."""
        d = self.d
        nodes: dict = {("v", v): ("v", v) for v in range(d.graph.order)}
        for xid in d.crossings:
            nodes[("x", xid)] = ("x", xid)

        def find(a):
            while nodes[a] != a:
                nodes[a] = nodes[nodes[a]]
                a = nodes[a]
            return a

        for s in range(len(self.seg_edge)):
            a, b = find(self.node(2 * s)), find(self.node(2 * s + 1))
            if a != b:
                nodes[a] = b
        comp_stats: dict = {}
        for n in list(nodes):
            comp_stats.setdefault(find(n), [0, 0, 0])[0] += 1
        for s in range(len(self.seg_edge)):
            comp_stats[find(self.node(2 * s))][1] += 1
        for face in self.faces:
            comp_stats[find(self.node(face[0]))][2] += 1
        out = []
        for root, (v, e, f) in sorted(comp_stats.items(), key=lambda kv: str(kv[0])):
            if e == 0:
                f = 1  # an isolated vertex sits in one face
            chi = v - e + f
            out.append((v, e, f, (2 - chi) // 2))
        return out


# -- validation ---------------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    kind: str  # "structural" or "topological"
    where: str
    message: str

    def to_json(self) -> dict:
        return {"kind": self.kind, "where": self.where, "message": self.message}


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)
    euler: list[tuple[int, int, int, int]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def structural(self) -> list[Violation]:
        return [v for v in self.violations if v.kind == "structural"]

    @property
    def topological(self) -> list[Violation]:
        return [v for v in self.violations if v.kind == "topological"]

    def to_json(self) -> dict:
        return {
            "valid": self.ok,
            "violations": [v.to_json() for v in self.violations],
            "components": [{"V": v, "E": e, "F": f, "genus": gen} for v, e, f, gen in self.euler],
        }


def validate(d: ImmersedDiagram) -> ValidationReport:
    """Check every structural invariant, then the genus-0 face count."""
    g = d.graph
    report = ValidationReport()
    bad = report.violations

    def structural(where: str, message: str) -> None:
        bad.append(Violation("structural", where, message))

    for v in range(g.order):
        rot = d.rotations[v] if v < len(d.rotations) else ()
        if sorted(rot) != sorted(g.incident_edges(v)):
            structural(f"vertex {g.vertices[v]}", "rotation must list each incident edge-end exactly once")
    occurrences: dict[str, list[tuple[int, int]]] = {}
    for e, trav in enumerate(d.traversals):
        for i, xid in enumerate(trav):
            occurrences.setdefault(xid, []).append((e, i))
    for xid, occ in sorted(occurrences.items()):
        if xid not in d.crossings:
            structural(f"crossing {xid}", "appears in a traversal but has no crossing record")
        if len(occ) != 2:
            structural(f"crossing {xid}", f"appears in {len(occ)} traversal slots, expected 2")
    for xid, x in sorted(d.crossings.items()):
        if x.hand not in (L, R):
            structural(f"crossing {xid}", "handedness must be L or R")
        for name, (e, i) in (("first", x.first), ("second", x.second)):
            if not (0 <= e < g.size and 0 <= i < len(d.traversals[e])):
                structural(f"crossing {xid}", f"{name} slot ({e}, {i}) is out of range")
            elif d.traversals[e][i] != xid:
                structural(f"crossing {xid}", f"{name} slot points at {d.traversals[e][i]!r}")
        if x.first == x.second:
            structural(f"crossing {xid}", "both slots are the same passage")
        if xid not in occurrences:
            structural(f"crossing {xid}", "does not appear in any traversal")
    if bad:
        return report
    report.euler = PlanarMap(d).euler_by_component()
    for k, (_, _, _, genus) in enumerate(report.euler):
        if genus != 0:
            bad.append(Violation("topological", f"component {k}", f"genus {genus}"))
    return report


def is_valid(d: ImmersedDiagram) -> bool:
    return validate(d).ok


# -- builders -----------------------------------------------------------------


def _half(v: tuple) -> int:
    x, y = v
    return 0 if (y > 0 or (y == 0 and x > 0)) else 1


def _ccw_cmp(u: tuple, v: tuple) -> int:
    hu, hv = _half(u), _half(v)
    if hu != hv:
        return -1 if hu < hv else 1
    c = u[0] * v[1] - u[1] * v[0]
    return -1 if c > 0 else (1 if c < 0 else 0)


def _sign(q) -> int:
    return (q > 0) - (q < 0)


def straight_line_diagram(g: Graph, coords: Sequence[tuple[int, int]]) -> ImmersedDiagram:
    """Diagram of a straight-line drawing with exact rational geometry.

    Raises DiagramError on degenerate input (collinear overlaps, a vertex on an
    edge, or three segments through one point).
    """
    pts = [(Fraction(x), Fraction(y)) for x, y in coords]
    sub = lambda p, q: (p[0] - q[0], p[1] - q[1])  # noqa: E731
    cross = lambda u, v: u[0] * v[1] - u[1] * v[0]  # noqa: E731
    dirs = [sub(pts[b], pts[a]) for a, b in g.edges]
    on_edge: list[list[tuple[Fraction, str, int]]] = [[] for _ in g.edges]
    crossings: dict[str, list] = {}
    for e, f in itertools.combinations(range(g.size), 2):
        a, _ = g.edges[e]
        c, _ = g.edges[f]
        denom = cross(dirs[e], dirs[f])
        if not set(g.edges[e]) & set(g.edges[f]):
            if denom == 0:
                if cross(sub(pts[c], pts[a]), dirs[e]) == 0:
                    raise DiagramError("collinear edges")
                continue
            t = cross(sub(pts[c], pts[a]), dirs[f]) / denom
            u = cross(sub(pts[c], pts[a]), dirs[e]) / denom
            if t <= 0 or t >= 1 or u <= 0 or u >= 1:
                if (0 <= t <= 1) and (0 <= u <= 1):
                    raise DiagramError("a vertex lies on an edge")
                continue
            xid = f"x{len(crossings) + 1}"
            crossings[xid] = [e, f, _sign(denom)]
            on_edge[e].append((t, xid, 0))
            on_edge[f].append((u, xid, 1))
        elif denom == 0:
            # adjacent edges pointing the same way would overlap
            shared = (set(g.edges[e]) & set(g.edges[f])).pop()
            de = dirs[e] if g.edges[e][0] == shared else (-dirs[e][0], -dirs[e][1])
            df = dirs[f] if g.edges[f][0] == shared else (-dirs[f][0], -dirs[f][1])
            if de[0] * df[0] + de[1] * df[1] > 0:
                raise DiagramError("overlapping adjacent edges")
    for v in range(g.order):
        for e in range(g.size):
            if v in g.edges[e]:
                continue
            a, b = g.edges[e]
            if cross(sub(pts[v], pts[a]), dirs[e]) == 0:
                lo = min(pts[a], pts[b])
                hi = max(pts[a], pts[b])
                if lo < pts[v] < hi:
                    raise DiagramError("a vertex lies on an edge")
    traversals = []
    slots: dict[str, list] = {xid: [None, None] for xid in crossings}
    for e, items in enumerate(on_edge):
        items.sort()
        params = [t for t, _, _ in items]
        if len(set(params)) != len(params):
            raise DiagramError("three segments meet in one point")
        for i, (_, xid, which) in enumerate(items):
            slots[xid][which] = (e, i)
        traversals.append(tuple(xid for _, xid, _ in items))
    rotations = []
    for v in range(g.order):
        out = []
        for e in g.incident_edges(v):
            a, b = g.edges[e]
            w = b if a == v else a
            out.append((sub(pts[w], pts[v]), e))
        out.sort(key=functools.cmp_to_key(lambda p, q: _ccw_cmp(p[0], q[0])))
        rotations.append(tuple(e for _, e in out))
    xs = {xid: Crossing(slots[xid][0], slots[xid][1], crossings[xid][2]) for xid in crossings}
    return ImmersedDiagram(g, tuple(rotations), tuple(traversals), xs)


ARCS = {
    # (i, i^2) has three concurrent diagonals from 9 points on; (i, 2^i) does not up to 16
    "exp": lambda i: (i, 2**i),
    "parabola": lambda i: (i, i * i),
}


def convex_drawing(g: Graph, order: Sequence[str | int] | None = None, arc: str = "exp") -> ImmersedDiagram:
    """Straight-line drawing with the vertices in convex position.

    ``order`` lists the vertices by position along the arc (default: the
    graph's own order).  Two edges cross exactly when their endpoints
    interleave in that order.  A degenerate placement raises DiagramError.
    """
    if order is None:
        order = list(range(g.order))
    idx = [o if isinstance(o, int) else g.vertex_index(o) for o in order]
    if sorted(idx) != list(range(g.order)):
        raise DiagramError("order must be a permutation of the vertices")
    try:
        point = ARCS[arc]
    except KeyError:
        raise DiagramError(f"unknown arc {arc!r}") from None
    place = {v: i for i, v in enumerate(idx)}
    coords = [point(place[v]) for v in range(g.order)]
    return straight_line_diagram(g, coords)


# -- identities and restriction ----------------------------------------------


_XID = re.compile(r"^x(\d+)$")


def fresh_crossing_ids(d: ImmersedDiagram, count: int) -> list[str]:
    top = 0
    for xid in d.crossings:
        m = _XID.match(xid)
        if m:
            top = max(top, int(m.group(1)))
    return [f"x{top + k + 1}" for k in range(count)]


def canonical_relabel(d: ImmersedDiagram) -> ImmersedDiagram:
    """Rename crossings x1, x2, ... in order of appearance along the edges.

    Slots are relabelled too: the passage met first becomes ``first``, with the
    handedness flipped when the two slots trade places.
    """
    rename: dict[str, str] = {}
    for trav in d.traversals:
        for xid in trav:
            if xid not in rename:
                rename[xid] = f"x{len(rename) + 1}"
    crossings = {}
    for xid, x in d.crossings.items():
        if x.second < x.first:
            x = Crossing(x.second, x.first, -x.hand)
        crossings[rename[xid]] = x
    return ImmersedDiagram(
        d.graph,
        d.rotations,
        tuple(tuple(rename[x] for x in t) for t in d.traversals),
        crossings,
    )


def same_up_to_renaming(a: ImmersedDiagram, b: ImmersedDiagram) -> bool:
    return canonical_relabel(a).to_json() == canonical_relabel(b).to_json()


def _as_cycle(g: Graph, gamma) -> Cycle:
    if isinstance(gamma, Cycle):
        return gamma
    vs = [v if isinstance(v, int) else g.vertex_index(v) for v in gamma]
    return Cycle(tuple(vs))


def restrict_to_cycle(d: ImmersedDiagram, gamma: Cycle | Iterable[str | int]) -> PlaneCurve:
    """f restricted to a cycle: the plane curve traced along ``gamma``.

    The curve starts at the cycle's first vertex and follows its vertex order.
    Only crossings with both passages on the cycle survive; their handedness is
    re-expressed relative to the curve's orientation and first occurrence.
    """
    g = d.graph
    gamma = _as_cycle(g, gamma)
    try:
        edges = gamma.edge_list(g)
    except GraphError as exc:
        raise DiagramError(f"not a cycle of the diagram's graph: {exc}") from None
    seen: dict[str, list] = {}
    order: list[str] = []
    slot_at = d.slot_at
    pos = 0
    for i, e in enumerate(edges):
        forward = g.edges[e][0] == gamma.vertices[i]
        trav = d.traversals[e]
        slots = slot_at[e]
        rng = range(len(trav)) if forward else range(len(trav) - 1, -1, -1)
        direction = 1 if forward else -1
        for occ in rng:
            xid = trav[occ]
            rec = seen.get(xid)
            if rec is None:
                rec = seen[xid] = [None, None, None, None]  # pos0, dir0, pos1, dir1
            which = slots[occ]
            rec[2 * which] = pos
            rec[2 * which + 1] = direction
            order.append(xid)
            pos += 1
    keep = {xid for xid, rec in seen.items() if rec[0] is not None and rec[2] is not None}
    sequence = tuple(xid for xid in order if xid in keep)
    hand = {}
    for xid in keep:
        p0, f0, p1, f1 = seen[xid]
        h = d.crossings[xid].hand * f0 * f1
        hand[xid] = -h if p1 < p0 else h
    return PlaneCurve(sequence, hand)


def cycle_rotation_ok(gamma: Sequence[int]) -> tuple[int, ...]:
    return canonical_rotation(gamma)


def diagram_from_curve(f: PlaneCurve, n: int = 3, cuts: Sequence[int] | None = None) -> ImmersedDiagram:
    """Immersion of the n-cycle graph tracing the plane curve ``f``.

    Vertex v(i+1) sits just before sequence position ``cuts[i]`` (default: an
    even spread, with v1 at the base point).  ``restrict_to_cycle`` along
    v1 .. vn recovers ``f`` up to crossing names.
    """
    from .graphs import cycle_graph

    f.check()
    if f.genus() != 0:
        raise DiagramError("the curve is not planar")
    m = len(f.sequence)
    if cuts is None:
        cuts = [(i * m) // n for i in range(n)]
    cuts = list(cuts)
    if len(cuts) != n or cuts != sorted(cuts) or (m and not (0 <= cuts[0] and cuts[-1] <= m)):
        raise DiagramError("cuts must be n non-decreasing sequence positions")
    g = cycle_graph(n)
    bounds = cuts + [m + cuts[0]]
    pieces: list[list[int]] = []
    for i in range(n):
        pieces.append([(p % m) for p in range(bounds[i], bounds[i + 1])] if m else [])
    # edges 0..n-2 run v(i+1) -> v(i+2); the last one is listed v1 -> vn, against the curve
    slot_of: dict[int, tuple[int, int]] = {}
    traversals = []
    for i, piece in enumerate(pieces):
        if i == n - 1:
            piece = piece[::-1]
        traversals.append(tuple(str(f.sequence[p]) for p in piece))
        for k, p in enumerate(piece):
            slot_of[p] = (i, k)
    direction = {p: (-1 if slot_of[p][0] == n - 1 else 1) for p in slot_of}
    crossings = {}
    for x, (p, q) in f.positions().items():
        h = f.handedness[x] * direction[p] * direction[q]
        crossings[str(x)] = Crossing(slot_of[p], slot_of[q], h)
    rotations = [tuple(g.incident_edges(v)) for v in range(n)]
    return ImmersedDiagram(g, tuple(rotations), tuple(traversals), crossings)
