"""Finite simple graphs, standard families, and cycle / edge-pair enumeration.

Vertices and edges carry opaque string names for the interchange format and
are addressed by dense integer indices everywhere else.
"""

from __future__ import annotations

import itertools
import re
import string
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence


class GraphError(ValueError):
    pass


@dataclass(frozen=True)
class Graph:
    """A simple undirected graph.

    ``edges[i]`` is the ordered endpoint pair of edge ``i``; the order fixes the
    edge's listed direction (endpoint 0 to endpoint 1) used by diagrams.
    """

    vertices: tuple[str, ...]
    edges: tuple[tuple[int, int], ...]
    edge_names: tuple[str, ...]
    _index: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self) -> None:
        if len(set(self.vertices)) != len(self.vertices):
            raise GraphError("duplicate vertex ids")
        if len(self.edge_names) != len(self.edges):
            raise GraphError("edge name count does not match edge count")
        if len(set(self.edge_names)) != len(self.edge_names):
            raise GraphError("duplicate edge ids")
        n = len(self.vertices)
        lookup: dict[frozenset, int] = {}
        for i, (a, b) in enumerate(self.edges):
            if not (0 <= a < n and 0 <= b < n):
                raise GraphError(f"edge {self.edge_names[i]} has an unknown endpoint")
            if a == b:
                raise GraphError(f"edge {self.edge_names[i]} is a self-loop")
            key = frozenset((a, b))
            if key in lookup:
                raise GraphError(f"edge {self.edge_names[i]} is parallel to {self.edge_names[lookup[key]]}")
            lookup[key] = i
        adjacency: list[list[int]] = [[] for _ in range(n)]
        for a, b in self.edges:
            adjacency[a].append(b)
            adjacency[b].append(a)
        index = {
            "vertex": {name: i for i, name in enumerate(self.vertices)},
            "edge": {name: i for i, name in enumerate(self.edge_names)},
            "pair": lookup,
            "adj": tuple(tuple(sorted(nb)) for nb in adjacency),
            "incident": tuple(
                tuple(i for i, e in enumerate(self.edges) if v in e) for v in range(n)
            ),
        }
        object.__setattr__(self, "_index", index)

    @classmethod
    def from_names(cls, vertices: Sequence[str], edges: Sequence[tuple[str, str, str]]) -> Graph:
        """Build from vertex names and ``(edge id, end0, end1)`` triples."""
        vindex = {v: i for i, v in enumerate(vertices)}
        pairs = []
        for name, a, b in edges:
            if a not in vindex or b not in vindex:
                raise GraphError(f"edge {name} has an unknown endpoint")
            pairs.append((vindex[a], vindex[b]))
        return cls(tuple(vertices), tuple(pairs), tuple(name for name, _, _ in edges))

    @property
    def order(self) -> int:
        return len(self.vertices)

    @property
    def size(self) -> int:
        return len(self.edges)

    def vertex_index(self, name: str) -> int:
        try:
            return self._index["vertex"][name]
        except KeyError:
            raise GraphError(f"unknown vertex {name!r}") from None

    def edge_index(self, name: str) -> int:
        try:
            return self._index["edge"][name]
        except KeyError:
            raise GraphError(f"unknown edge {name!r}") from None

    def edge_between(self, u: int, v: int) -> int | None:
        return self._index["pair"].get(frozenset((u, v)))

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self._index["adj"][v]

    def incident_edges(self, v: int) -> tuple[int, ...]:
        return self._index["incident"][v]

    def degree(self, v: int) -> int:
        return len(self._index["adj"][v])

    def edges_disjoint(self, e: int, f: int) -> bool:
        return not set(self.edges[e]) & set(self.edges[f])

    def to_json(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "edges": [
                {"id": name, "ends": [self.vertices[a], self.vertices[b]]}
                for name, (a, b) in zip(self.edge_names, self.edges)
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> Graph:
        try:
            vertices = [str(v) for v in data["vertices"]]
            edges = [(str(e["id"]), str(e["ends"][0]), str(e["ends"][1])) for e in data["edges"]]
        except (KeyError, TypeError, IndexError) as exc:
            raise GraphError(f"malformed graph record: {exc}") from None
        return cls.from_names(vertices, edges)


def _edge_name(g_vertices: Sequence[str], a: int, b: int) -> str:
    return f"{g_vertices[a]}-{g_vertices[b]}"


def _from_pairs(vertices: Sequence[str], pairs: Iterable[tuple[int, int]]) -> Graph:
    pairs = tuple(pairs)
    return Graph(tuple(vertices), pairs, tuple(_edge_name(vertices, a, b) for a, b in pairs))


def complete_graph(n: int) -> Graph:
    """K_n on vertices v1..vn, edges in lexicographic order."""
    if n < 1:
        raise GraphError("complete_graph needs n >= 1")
    vertices = [f"v{i + 1}" for i in range(n)]
    return _from_pairs(vertices, itertools.combinations(range(n), 2))


def complete_multipartite(parts: Sequence[int]) -> Graph:
    """Complete multipartite graph; part k gets vertex names a1.., b1.., ..."""
    if len(parts) < 2:
        raise GraphError("complete_multipartite needs at least two parts")
    if any(p < 1 for p in parts):
        raise GraphError("parts must be positive")
    if len(parts) > len(string.ascii_lowercase):
        raise GraphError("too many parts")
    vertices: list[str] = []
    part_of: list[int] = []
    for k, size in enumerate(parts):
        for i in range(size):
            vertices.append(f"{string.ascii_lowercase[k]}{i + 1}")
            part_of.append(k)
    pairs = [(a, b) for a, b in itertools.combinations(range(len(vertices)), 2) if part_of[a] != part_of[b]]
    return _from_pairs(vertices, pairs)


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise GraphError("cycle_graph needs n >= 3")
    vertices = [f"v{i + 1}" for i in range(n)]
    return _from_pairs(vertices, [(i, i + 1) for i in range(n - 1)] + [(0, n - 1)])


def path_graph(n: int) -> Graph:
    if n < 1:
        raise GraphError("path_graph needs n >= 1")
    vertices = [f"v{i + 1}" for i in range(n)]
    return _from_pairs(vertices, [(i, i + 1) for i in range(n - 1)])


_SHORTHAND = re.compile(r"^([KC])(\d+(?:,\d+)*)$")


def graph_from_shorthand(name: str) -> Graph:
    """Parse ``K6``, ``K3,3``, ``K3,3,1`` (complete / multipartite) or ``C6`` (cycle)."""
    m = _SHORTHAND.match(name.replace(" ", ""))
    if not m:
        raise GraphError(f"unrecognised graph name {name!r}")
    kind, numbers = m.group(1), [int(x) for x in m.group(2).split(",")]
    if kind == "C":
        if len(numbers) != 1:
            raise GraphError(f"unrecognised graph name {name!r}")
        return cycle_graph(numbers[0])
    if len(numbers) == 1:
        return complete_graph(numbers[0])
    return complete_multipartite(numbers)


def induced_subgraph(g: Graph, w: Iterable[str | int]) -> Graph:
    """G[W]: keeps the vertex order of ``g`` and every edge with both ends in W."""
    chosen = set()
    for v in w:
        chosen.add(v if isinstance(v, int) else g.vertex_index(v))
        if isinstance(v, int) and not 0 <= v < g.order:
            raise GraphError(f"unknown vertex index {v}")
    keep = [v for v in range(g.order) if v in chosen]
    remap = {v: i for i, v in enumerate(keep)}
    edges, names = [], []
    for name, (a, b) in zip(g.edge_names, g.edges):
        if a in chosen and b in chosen:
            edges.append((remap[a], remap[b]))
            names.append(name)
    return Graph(tuple(g.vertices[v] for v in keep), tuple(edges), tuple(names))


@dataclass(frozen=True, order=True)
class Cycle:
    """A cycle as a canonical vertex tuple (indices into the host graph).

    Canonical: starts at the smallest vertex and, of the two directions,
    the one whose second vertex is smaller.
    """

    vertices: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.vertices) < 3:
            raise GraphError("a cycle needs at least 3 vertices")
        if len(set(self.vertices)) != len(self.vertices):
            raise GraphError("cycle vertices must be distinct")

    @classmethod
    def canonical(cls, vertices: Sequence[int]) -> Cycle:
        return cls(canonical_rotation(vertices))

    def __len__(self) -> int:
        return len(self.vertices)

    def edge_list(self, g: Graph) -> list[int]:
        """Edge indices in traversal order; raises if some step is not an edge."""
        out = []
        vs = self.vertices
        for i, u in enumerate(vs):
            v = vs[(i + 1) % len(vs)]
            e = g.edge_between(u, v)
            if e is None:
                raise GraphError(f"{g.vertices[u]} and {g.vertices[v]} are not adjacent")
            out.append(e)
        return out

    def is_cycle_of(self, g: Graph) -> bool:
        try:
            self.edge_list(g)
        except GraphError:
            return False
        return True

    def names(self, g: Graph) -> list[str]:
        return [g.vertices[v] for v in self.vertices]


def canonical_rotation(vertices: Sequence[int]) -> tuple[int, ...]:
    vs = list(vertices)
    k = vs.index(min(vs))
    fwd = vs[k:] + vs[:k]
    bwd = [fwd[0]] + fwd[1:][::-1]
    return tuple(min(fwd, bwd))


def iter_cycles(
    g: Graph, n: int, start_after: Sequence[int] | None = None, prefix: Sequence[int] = ()
) -> Iterator[Cycle]:
    """Yield every n-cycle once, canonical, in lexicographic order.

    DFS from each start vertex over larger vertices only; a closed path is
    emitted only in its canonical direction (second vertex < last vertex).
    With ``start_after`` the stream resumes strictly after that canonical tuple;
    ``prefix`` keeps only cycles whose vertex tuple starts with it.
    """
    if n < 3 or n > g.order:
        return
    if isinstance(start_after, Cycle):
        start_after = start_after.vertices
    resume = tuple(start_after) if start_after is not None else None
    adj = [g.neighbors(v) for v in range(g.order)]
    path: list[int] = []
    used = [False] * g.order

    def below_resume(prefix_len: int) -> bool:
        # prefix strictly less than the same-length prefix of the resume point
        return resume is not None and tuple(path[:prefix_len]) < resume[:prefix_len]

    def extend(start: int) -> Iterator[Cycle]:
        depth = len(path)
        if below_resume(depth):
            return
        last = path[-1]
        if depth == n:
            if start in adj[last] and path[1] < last:
                t = tuple(path)
                if resume is None or t > resume:
                    yield Cycle(t)
            return
        for w in adj[last]:
            if w <= start or used[w]:
                continue
            if depth < len(prefix) and w != prefix[depth]:
                continue
            # the canonical direction needs the closing vertex larger than path[1]
            if depth == n - 1 and depth >= 2 and w < path[1]:
                continue
            used[w] = True
            path.append(w)
            yield from extend(start)
            path.pop()
            used[w] = False

    for s in range(g.order):
        if resume is not None and s < resume[0]:
            continue
        if prefix and s != prefix[0]:
            continue
        used[s] = True
        path.append(s)
        yield from extend(s)
        path.pop()
        used[s] = False


def cycles(g: Graph, n: int) -> list[Cycle]:
    """Gamma_n(G): all n-cycles in canonical form and deterministic order."""
    return list(iter_cycles(g, n))


@dataclass(frozen=True)
class EdgePair:
    first: int
    second: int

    def __post_init__(self) -> None:
        if self.first >= self.second:
            raise GraphError("EdgePair stores edge indices in increasing order")


def disjoint_edge_pairs(g: Graph) -> list[EdgePair]:
    """Every unordered pair of vertex-disjoint edges, lexicographic by index."""
    out = []
    for e, f in itertools.combinations(range(g.size), 2):
        if g.edges_disjoint(e, f):
            out.append(EdgePair(e, f))
    return out
