"""Defining graphs of 2-dimensional right-angled Artin groups."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations


class GraphError(ValueError):
    """Malformed graph description (duplicate labels, unknown endpoints)."""


@dataclass(frozen=True)
class Join:
    """A complete bipartite subgraph ``side1 * side2``."""

    side1: tuple
    side2: tuple

    def vertices(self) -> frozenset:
        return frozenset(self.side1) | frozenset(self.side2)

    def side_of(self, v) -> int:
        if v in self.side1:
            return 1
        if v in self.side2:
            return 2
        raise KeyError(v)


@dataclass(frozen=True)
class Violation:
    kind: str  # "loop", "multi-edge", "triangle", "isolated"
    vertices: tuple

    def __str__(self):
        names = {"triangle": "3-cycle", "isolated": "valence 0"}
        return f"{names.get(self.kind, self.kind)}: {{{','.join(map(str, self.vertices))}}}"


@dataclass
class ValidationReport:
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __str__(self):
        if self.ok:
            return "ok"
        return "\n".join(str(v) for v in self.violations)


class DefiningGraph:
    """A finite simplicial graph.  Vertex order is the input order and drives all tie-breaks."""

    def __init__(self, vertices, edges):
        vertices = list(vertices)
        if len(set(vertices)) != len(vertices):
            dup = sorted({v for v in vertices if vertices.count(v) > 1}, key=str)
            raise GraphError(f"duplicate vertex labels: {dup}")
        self.vertices = tuple(vertices)
        self._order = {v: i for i, v in enumerate(self.vertices)}
        self.raw_edges = []
        for e in edges:
            u, w = tuple(e)
            for x in (u, w):
                if x not in self._order:
                    raise GraphError(f"edge {u}-{w} references unknown vertex {x!r}")
            self.raw_edges.append((u, w))
        self.edges = frozenset(frozenset(e) for e in self.raw_edges if e[0] != e[1])
        self._adj = {v: set() for v in self.vertices}
        for u, w in self.raw_edges:
            if u != w:
                self._adj[u].add(w)
                self._adj[w].add(u)

    def __repr__(self):
        es = " ".join(f"{u}-{w}" for u, w in sorted((self.sorted_pair(e) for e in self.edges), key=self.key))
        return f"DefiningGraph({' '.join(map(str, self.vertices))} | {es})"

    def key(self, x):
        if isinstance(x, tuple):
            return tuple(self._order[v] for v in x)
        return self._order[x]

    def sorted_pair(self, e):
        return tuple(sorted(e, key=self._order.__getitem__))

    def index(self, v) -> int:
        return self._order[v]

    def adjacent(self, u, w) -> bool:
        return w in self._adj[u]

    def neighbors(self, v) -> tuple:
        return tuple(sorted(self._adj[v], key=self._order.__getitem__))

    def star(self, v) -> frozenset:
        return frozenset(self._adj[v]) | {v}

    def subgraph_is_join(self, side1, side2) -> bool:
        return all(self.adjacent(a, b) for a in side1 for b in side2)

    # constructors ---------------------------------------------------------
    @classmethod
    def cycle(cls, labels):
        labels = list(labels)
        n = len(labels)
        return cls(labels, [(labels[i], labels[(i + 1) % n]) for i in range(n)])

    @classmethod
    def complete_bipartite(cls, side1, side2):
        return cls(list(side1) + list(side2), [(a, b) for a in side1 for b in side2])

    @classmethod
    def path(cls, labels):
        labels = list(labels)
        return cls(labels, list(zip(labels, labels[1:])))


def validate(graph: DefiningGraph) -> ValidationReport:
    """List every violated hypothesis: loops, multi-edges, triangles, isolated vertices."""
    report = ValidationReport()
    seen = set()
    for u, w in graph.raw_edges:
        if u == w:
            report.violations.append(Violation("loop", (u,)))
            continue
        e = frozenset((u, w))
        if e in seen:
            report.violations.append(Violation("multi-edge", graph.sorted_pair(e)))
        seen.add(e)
    for tri in combinations(graph.vertices, 3):
        a, b, c = tri
        if graph.adjacent(a, b) and graph.adjacent(b, c) and graph.adjacent(a, c):
            report.violations.append(Violation("triangle", tri))
    for v in graph.vertices:
        if not graph.neighbors(v):
            report.violations.append(Violation("isolated", (v,)))
    return report


def _canonical_join(graph: DefiningGraph, s1, s2) -> Join:
    s1 = tuple(sorted(s1, key=graph.index))
    s2 = tuple(sorted(s2, key=graph.index))
    if graph.index(s2[0]) < graph.index(s1[0]):
        s1, s2 = s2, s1
    return Join(s1, s2)


def maximal_joins(graph: DefiningGraph) -> list:
    """All inclusion-maximal complete bipartite subgraphs, in canonical side order.

    A join's sides are independent sets when the graph is triangle-free, so the
    search runs over pairs of disjoint vertex sets; exhaustive and meant for
    small graphs.
    """
    verts = graph.vertices
    n = len(verts)
    candidates = set()
    # every complete bipartite subgraph sits inside (A, common neighbours of A)
    for r in range(1, n + 1):
        for side1 in combinations(verts, r):
            common = set(verts)
            for v in side1:
                common &= set(graph.neighbors(v))
            if not common:
                continue
            side2 = frozenset(common)
            # close side1 to everything adjacent to all of side2
            closure = set(verts)
            for w in side2:
                closure &= set(graph.neighbors(w))
            candidates.add((frozenset(closure), side2))
    joins = {}
    for s1, s2 in candidates:
        j = _canonical_join(graph, s1, s2)
        joins[(j.side1, j.side2)] = j
    out = []
    for j in joins.values():
        if not _is_maximal(graph, j):
            continue
        out.append(j)
    out.sort(key=lambda j: (graph.key(j.side1), graph.key(j.side2)))
    return out


def _is_maximal(graph: DefiningGraph, j: Join) -> bool:
    used = j.vertices()
    for v in graph.vertices:
        if v in used:
            continue
        if all(graph.adjacent(v, w) for w in j.side2):
            return False
        if all(graph.adjacent(v, w) for w in j.side1):
            return False
    return True


def star_vertex(graph: DefiningGraph):
    """The least vertex whose star is the whole graph, or None."""
    everything = frozenset(graph.vertices)
    for v in graph.vertices:
        if graph.star(v) == everything:
            return v
    return None
