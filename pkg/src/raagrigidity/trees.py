"""Exact geometry of the Cayley tree of a free group with weighted generators.

Vertices of the tree are freely reduced words; the edge ``[u, u x]`` has the
length of the generator ``x``.  All distances are exact ``Q2`` values.
"""
from __future__ import annotations

import math
from collections import Counter
from fractions import Fraction
from dataclasses import dataclass

from .exact import Q2
from .words import free_cyclic_reduce, free_reduce, free_root, inverse

INF = math.inf


class MetricRose:
    """A free group on ``generators`` acting on its Cayley tree with edge lengths ``length``."""

    def __init__(self, lengths: dict):
        if not lengths:
            raise ValueError("a rose needs at least one generator")
        self.length = {}
        for g, v in lengths.items():
            v = Q2.coerce(v)
            if v.sign() <= 0:
                raise ValueError(f"length of {g!r} must be positive, got {v}")
            self.length[g] = v
        self.generators = tuple(lengths)

    def __repr__(self):
        body = ", ".join(f"{g}={v}" for g, v in self.length.items())
        return f"MetricRose({body})"

    def scaled(self, factor) -> "MetricRose":
        f = Q2.coerce(factor)
        return MetricRose({g: v * f for g, v in self.length.items()})

    def with_length(self, g, value) -> "MetricRose":
        d = dict(self.length)
        d[g] = Q2.coerce(value)
        return MetricRose(d)

    def weight(self, w) -> Q2:
        counts = Counter(x for x, _ in w)
        a = sum((self.length[x].a * n for x, n in counts.items()), Fraction(0))
        b = sum((self.length[x].b * n for x, n in counts.items()), Fraction(0))
        return Q2._raw(a, b)

    def valence(self) -> int:
        return 2 * len(self.generators)

    def check(self, w):
        for x, _ in w:
            if x not in self.length:
                raise ValueError(f"{x!r} is not a generator of {self!r}")
        return tuple(w)


def word_length(rose: MetricRose, w) -> Q2:
    """Distance from the base vertex to ``w``."""
    return rose.weight(free_reduce(w))


def vertex_distance(rose: MetricRose, u, v) -> Q2:
    return rose.weight(free_reduce(inverse(u) + tuple(v)))


def tree_length(rose: MetricRose, w) -> Q2:
    """Translation length: weighted length of the cyclically reduced core."""
    _, core = free_cyclic_reduce(rose.check(w))
    return rose.weight(core)


# --------------------------------------------------------------------------
# axes


@dataclass(frozen=True)
class Axis:
    """Axis of ``base core base^-1``: vertices ``base * (prefixes of core^k)``."""

    core: tuple
    base: tuple

    def vertex(self, k: int) -> tuple:
        """Vertex at signed letter index ``k`` (``k = 0`` is ``base``)."""
        n = len(self.core)
        if k >= 0:
            q, r = divmod(k, n)
            path = self.core * q + self.core[:r]
        else:
            inv = inverse(self.core)
            q, r = divmod(-k, n)
            path = inv * q + inv[:r]
        return free_reduce(self.base + path)

    def letter_index(self, v):
        """Signed letter index of vertex ``v`` on the axis, or None if off the axis."""
        r = free_reduce(inverse(self.base) + tuple(v))
        n = len(self.core)
        if all(r[i] == self.core[i % n] for i in range(len(r))):
            return len(r)
        inv = inverse(self.core)
        if all(r[i] == inv[i % n] for i in range(len(r))):
            return -len(r)
        return None

    def project(self, v) -> tuple:
        """Nearest axis vertex to ``v`` and its letter index."""
        r = free_reduce(inverse(self.base) + tuple(v))
        n = len(self.core)
        inv = inverse(self.core)
        k = 0
        while k < len(r) and r[k] == self.core[k % n]:
            k += 1
        if k > 0:
            return self.vertex(k), k
        while k < len(r) and r[k] == inv[k % n]:
            k += 1
        return self.vertex(-k), -k

    def position(self, rose: MetricRose, k: int) -> Q2:
        """Signed distance along the axis from ``base`` to vertex ``k``."""
        n = len(self.core)
        if k >= 0:
            q, r = divmod(k, n)
            return rose.weight(self.core) * q + rose.weight(self.core[:r])
        q, r = divmod(-k, n)
        inv = inverse(self.core)
        return -(rose.weight(self.core) * q + rose.weight(inv[:r]))


def axis(rose: MetricRose, w) -> Axis:
    c, core = free_cyclic_reduce(rose.check(w))
    if not core:
        raise ValueError("the identity has no axis")
    return Axis(core, c)


def same_axis(w1, w2) -> bool:
    r1, _ = free_root(w1)
    r2, _ = free_root(w2)
    return r1 == r2 or free_reduce(inverse(r1)) == r2


@dataclass(frozen=True)
class AxisGap:
    distance: Q2
    overlap: object  # Q2 or math.inf
    nearest: tuple  # (vertex on axis 1, vertex on axis 2)
    segment: tuple | None = None  # letter-index range (lo, hi) of the overlap on axis 1

    @property
    def disjoint(self) -> bool:
        return self.distance.sign() > 0


def axis_gap(rose: MetricRose, w1, w2) -> AxisGap:
    """Distance between the axes of ``w1`` and ``w2`` and the length of their overlap."""
    a1, a2 = axis(rose, w1), axis(rose, w2)
    if same_axis(free_reduce(w1), free_reduce(w2)):
        return AxisGap(Q2(0), INF, (a1.base, a1.base), None)
    p2, _ = a2.project(a1.base)
    p1, k = a1.project(p2)
    d = vertex_distance(rose, p1, p2)
    if d.sign() > 0:
        return AxisGap(d, Q2(0), (p1, p2), None)
    bound = 4 * (len(a1.core) + len(a2.core)) + 4
    lo = hi = k
    while hi - k < bound and a2.letter_index(a1.vertex(hi + 1)) is not None:
        hi += 1
    while k - lo < bound and a2.letter_index(a1.vertex(lo - 1)) is not None:
        lo -= 1
    if hi - k >= bound or k - lo >= bound:
        raise AssertionError("unbounded overlap between axes with distinct roots")
    overlap = a1.position(rose, hi) - a1.position(rose, lo)
    start = a1.vertex(lo)
    return AxisGap(Q2(0), overlap, (start, start), (lo, hi))


def axis_overlap_direction(rose: MetricRose, w1, w2) -> str:
    """``"same"``/``"opposite"`` translation directions along the shared segment, else ``"disjoint"``."""
    gap = axis_gap(rose, w1, w2)
    a1, a2 = axis(rose, w1), axis(rose, w2)
    if gap.overlap == INF:
        r1, _ = free_root(w1)
        r2, _ = free_root(w2)
        # w = c root^e c^-1 with e > 0
        return "same" if r1 == r2 else "opposite"
    if gap.distance.sign() > 0 or gap.overlap.sign() == 0:
        return "disjoint"
    lo, _ = gap.segment
    i0 = a2.letter_index(a1.vertex(lo))
    i1 = a2.letter_index(a1.vertex(lo + 1))
    return "same" if i1 > i0 else "opposite"


# --------------------------------------------------------------------------
# points of the tree


@dataclass(frozen=True)
class TreePoint:
    """The point at distance ``offset`` from vertex ``vertex`` toward ``vertex * letter``."""

    vertex: tuple
    letter: tuple | None = None
    offset: Q2 = Q2(0)

    def normalized(self, rose: MetricRose) -> "TreePoint":
        if self.letter is None or not self.offset:
            return TreePoint(free_reduce(self.vertex))
        if self.offset == rose.length[self.letter[0]]:
            return TreePoint(free_reduce(self.vertex + (self.letter,)))
        return TreePoint(free_reduce(self.vertex), self.letter, self.offset)

    def ends(self, rose: MetricRose):
        """``[(vertex, distance)]`` for the vertices of the carrying edge."""
        p = self.normalized(rose)
        if p.letter is None:
            return [(p.vertex, Q2(0))]
        far = free_reduce(p.vertex + (p.letter,))
        return [(p.vertex, p.offset), (far, rose.length[p.letter[0]] - p.offset)]

    def translate(self, g) -> "TreePoint":
        return TreePoint(free_reduce(tuple(g) + self.vertex), self.letter, self.offset)

    def is_vertex(self, rose: MetricRose) -> bool:
        return self.normalized(rose).letter is None


def _edge_key(rose, p: TreePoint):
    p = p.normalized(rose)
    if p.letter is None:
        return None
    far = free_reduce(p.vertex + (p.letter,))
    return frozenset((p.vertex, far))


def point_distance(rose: MetricRose, p: TreePoint, q: TreePoint) -> Q2:
    p, q = p.normalized(rose), q.normalized(rose)
    ep, eq = _edge_key(rose, p), _edge_key(rose, q)
    if ep is not None and ep == eq:
        # same open edge: compare offsets measured from a common endpoint
        off_q = q.offset if q.vertex == p.vertex else rose.length[q.letter[0]] - q.offset
        return abs(p.offset - off_q)
    best = None
    for u, du in p.ends(rose):
        for v, dv in q.ends(rose):
            d = du + vertex_distance(rose, u, v) + dv
            if best is None or d < best:
                best = d
    return best


def axis_point(rose: MetricRose, ax: Axis, start_index: int, s) -> TreePoint:
    """Point at signed distance ``s`` along ``ax`` from its vertex ``start_index``."""
    s = Q2.coerce(s)
    k = start_index
    if s.sign() >= 0:
        while True:
            nxt = ax.position(rose, k + 1) - ax.position(rose, k)
            if s < nxt:
                v = ax.vertex(k)
                nv = ax.vertex(k + 1)
                letter = free_reduce(inverse(v) + nv)[0]
                return TreePoint(v, letter, s).normalized(rose)
            s = s - nxt
            k += 1
    while True:
        prv = ax.position(rose, k) - ax.position(rose, k - 1)
        if -s < prv or not s:
            v = ax.vertex(k)
            pv = ax.vertex(k - 1)
            letter = free_reduce(inverse(v) + pv)[0]
            return TreePoint(v, letter, -s).normalized(rose)
        s = s + prv
        k -= 1


def axis_coordinate(rose: MetricRose, ax: Axis, p: TreePoint):
    """Signed position along ``ax`` of a point lying on it, or None if it is off the axis."""
    p = p.normalized(rose)
    k = ax.letter_index(p.vertex)
    if k is None:
        return None
    base = ax.position(rose, k)
    if p.letter is None:
        return base
    far = free_reduce(p.vertex + (p.letter,))
    if ax.vertex(k + 1) == far:
        return base + p.offset
    if ax.vertex(k - 1) == far:
        return base - p.offset
    return None
