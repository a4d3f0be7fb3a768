"""Products of metric trees ``T1 x T2`` acted on by ``F(V1) x F(V2)``.

This is the ground-truth side: every quantity here is computed directly from
the model, never from a length function.  The star case ``E^1 x T`` is a
product whose first factor is a line, with the free part allowed to shear
along it (``skew``).
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .exact import Q2, RootSum, hypot_sq
from .graph import DefiningGraph, Join
from .trees import (
    INF,
    Axis,
    MetricRose,
    TreePoint,
    axis,
    axis_gap,
    axis_overlap_direction,
    point_distance,
    tree_length,
)
from .words import RAAG, BasicZ2, free_reduce, free_root, inverse, power


@dataclass(frozen=True)
class LinePoint:
    """A point of the line factor in star mode (signed coordinate)."""

    coord: Q2

    def translate_by(self, amount) -> "LinePoint":
        return LinePoint(self.coord + amount)


class ProductComplex:
    """``T1 x T2`` for a join ``side1 * side2``, or ``E^1 x T`` in star mode.

    ``marking`` optionally relabels generators before they act (an automorphism
    permuting generators within each side, possibly inverting them).
    """

    def __init__(self, join: Join, rose1: MetricRose, rose2: MetricRose,
                 star: bool = False, skew: dict | None = None, marking: dict | None = None):
        self.join = join
        self.rose1 = rose1
        self.rose2 = rose2
        self.star = star
        self.skew = {k: Q2.coerce(v) for k, v in (skew or {}).items()}
        self.marking = dict(marking or {})
        if star and len(join.side1) != 1:
            raise ValueError("star mode needs a single central vertex in side1")
        if set(rose1.generators) != set(join.side1) or set(rose2.generators) != set(join.side2):
            raise ValueError("roses must match the join sides")
        for src, (dst, s) in self.marking.items():
            if join.side_of(src) != join.side_of(dst) or s not in (1, -1):
                raise ValueError(f"marking {src}->{dst} must preserve sides")
        if self.skew and not star:
            raise ValueError("skew only applies in star mode")
        self.graph = DefiningGraph(join.side1 + join.side2,
                                   [(a, b) for a in join.side1 for b in join.side2])
        self.group = RAAG(self.graph)

    @classmethod
    def from_lengths(cls, side1, side2, lengths: dict, **kw):
        join = Join(tuple(side1), tuple(side2))
        r1 = MetricRose({v: lengths[v] for v in side1})
        r2 = MetricRose({v: lengths[v] for v in side2})
        return cls(join, r1, r2, **kw)

    def __repr__(self):
        mode = f"star({self.central})" if self.star else "product"
        return f"ProductComplex({mode}, {self.rose1!r}, {self.rose2!r})"

    @property
    def central(self):
        return self.join.side1[0] if self.star else None

    def with_length(self, label, value) -> "ProductComplex":
        r1, r2 = self.rose1, self.rose2
        if label in r1.length:
            r1 = r1.with_length(label, value)
        else:
            r2 = r2.with_length(label, value)
        return ProductComplex(self.join, r1, r2, self.star, self.skew, self.marking)

    # projections ------------------------------------------------------------
    def mark(self, w) -> tuple:
        if not self.marking:
            return tuple(w)
        out = []
        for x, s in w:
            if x in self.marking:
                y, t = self.marking[x]
                out.append((y, s * t))
            else:
                out.append((x, s))
        return tuple(out)

    def project(self, w, side: int) -> tuple:
        keep = set(self.join.side1 if side == 1 else self.join.side2)
        return free_reduce([x for x in self.mark(w) if x[0] in keep])

    def shear(self, w) -> Q2:
        """The line translation ``lambda(w)`` in star mode."""
        v = self.central
        total = Q2(0)
        for x, s in self.mark(w):
            if x == v:
                total = total + self.rose1.length[v] * s
            elif x in self.skew:
                total = total + self.skew[x] * s
        return total

    def factor_lengths(self, w) -> tuple:
        """Translation lengths of ``w`` on the two factors (``|lambda|`` on the line in star mode)."""
        if self.star:
            return abs(self.shear(w)), tree_length(self.rose2, self.project(w, 2))
        return tree_length(self.rose1, self.project(w, 1)), tree_length(self.rose2, self.project(w, 2))

    # metric -------------------------------------------------------------
    def length(self, w) -> RootSum:
        """Translation length, ``sqrt(l1^2 + l2^2)``."""
        l1, l2 = self.factor_lengths(w)
        return hypot_sq(l1, l2)

    def length_squared(self, w) -> Q2:
        l1, l2 = self.factor_lengths(w)
        return l1 * l1 + l2 * l2

    def point_distance(self, p, q) -> RootSum:
        if self.star:
            d1 = abs(p[0].coord - q[0].coord)
        else:
            d1 = point_distance(self.rose1, p[0], q[0])
        d2 = point_distance(self.rose2, p[1], q[1])
        return hypot_sq(d1, d2)

    def act(self, w, p) -> tuple:
        """Image of the point ``p = (p1, p2)`` under the group element ``w``."""
        if self.star:
            first = p[0].translate_by(self.shear(w))
        else:
            first = p[0].translate(self.project(w, 1))
        return first, p[1].translate(self.project(w, 2))

    def origin(self) -> tuple:
        first = LinePoint(Q2(0)) if self.star else TreePoint(())
        return first, TreePoint(())

    # minsets ------------------------------------------------------------------
    def minset(self, H: BasicZ2) -> "Minset":
        g1, g2 = H.generators()
        w1 = self.project(g1, 1)
        w2 = self.project(g2, 2)
        if not w2 or (not self.star and not w1):
            raise ValueError(f"{H} is not a basic subgroup of {self.join}")
        ax1 = None if self.star else axis(self.rose1, w1)
        ax2 = axis(self.rose2, w2)
        l1 = abs(self.shear(g1)) if self.star else tree_length(self.rose1, w1)
        return Minset(H, ax1, ax2, (l1, tree_length(self.rose2, w2)), (w1, w2))

    def _factor_gaps(self, M1: "Minset", M2: "Minset"):
        if self.star:
            gap1 = None
        else:
            gap1 = axis_gap(self.rose1, M1.factor_words[0], M2.factor_words[0])
        gap2 = axis_gap(self.rose2, M1.factor_words[1], M2.factor_words[1])
        return gap1, gap2

    def minset_intersection(self, M1: "Minset", M2: "Minset") -> "RectangleReport":
        gap1, gap2 = self._factor_gaps(M1, M2)
        d1 = Q2(0) if gap1 is None else gap1.distance
        if d1.sign() > 0 or gap2.distance.sign() > 0:
            return RectangleReport("empty", ())
        r1 = INF if gap1 is None else gap1.overlap
        r2 = gap2.overlap
        kind = classify_sides(r1, r2)
        anchor = (None if gap1 is None else gap1.nearest[0], gap2.nearest[0])
        common = self.group.subgroup_intersection(M1.subgroup, M2.subgroup)
        sides = []
        if kind != "point":
            for i, r in ((1, r1), (2, r2)):
                direction = None
                if _positive(r):
                    direction = self._direction(M1, M2, i)
                sides.append(Side(r, _unit(i), _unit(i), direction))
        return RectangleReport(kind, tuple(sorted(sides, key=Side.sort_key)), anchor=anchor,
                               intersection=None if common in (None, "equal") else common)

    def _direction(self, M1, M2, i) -> int:
        if self.star and i == 1:
            a = self.shear(M1.subgroup.generators()[0])
            b = self.shear(M2.subgroup.generators()[0])
            return 1 if a.sign() == b.sign() else -1
        rose = self.rose1 if i == 1 else self.rose2
        d = axis_overlap_direction(rose, M1.factor_words[i - 1], M2.factor_words[i - 1])
        return 1 if d == "same" else -1

    def minset_distance(self, M1: "Minset", M2: "Minset") -> tuple:
        """``(distance, (endpoint on M1, endpoint on M2))``, endpoints as vertex pairs."""
        gap1, gap2 = self._factor_gaps(M1, M2)
        d1 = Q2(0) if gap1 is None else gap1.distance
        d = hypot_sq(d1, gap2.distance)
        if gap1 is None:
            e1 = (LinePoint(Q2(0)), TreePoint(gap2.nearest[0]))
            e2 = (LinePoint(Q2(0)), TreePoint(gap2.nearest[1]))
        else:
            e1 = (TreePoint(gap1.nearest[0]), TreePoint(gap2.nearest[0]))
            e2 = (TreePoint(gap1.nearest[1]), TreePoint(gap2.nearest[1]))
        return d, (e1, e2)

    def factor_distances(self, M1, M2) -> tuple:
        gap1, gap2 = self._factor_gaps(M1, M2)
        return (Q2(0) if gap1 is None else gap1.distance), gap2.distance

    def intersection_intervals(self, M: "Minset", other: "Minset"):
        """``M ∩ other`` as a box of axis-position intervals in ``M``'s flat, or None."""
        out = []
        for i in (1, 2):
            if self.star and i == 1:
                out.append((-INF, INF))
                continue
            rose = self.rose1 if i == 1 else self.rose2
            gap = axis_gap(rose, M.factor_words[i - 1], other.factor_words[i - 1])
            ax = M.axes[i - 1]
            if gap.distance.sign() > 0:
                return None
            if gap.overlap == INF:
                out.append((-INF, INF))
                continue
            lo, hi = gap.segment  # letter indices on M's axis
            out.append((ax.position(rose, lo), ax.position(rose, hi)))
        return tuple(out)

    # corners ------------------------------------------------------------------
    def is_corner(self, point) -> bool:
        """Both coordinates are tree vertices of valence at least 3."""
        if self.star:
            return False
        p1, p2 = point
        if not p1.is_vertex(self.rose1) or not p2.is_vertex(self.rose2):
            return False
        return self.rose1.valence() >= 3 and self.rose2.valence() >= 3

    def corner_cover_witness(self, h, p, K: int = 32):
        """Least ``k <= K`` with ``g = h^k p^k`` overlapping both axes beyond a period.

        Returns ``(k, g, overlap_with_p, overlap_with_h)``.  Raises ValueError on
        equal primitive roots, or when no ``k <= K`` works (message lists the
        overlaps observed).
        """
        if not self.star:
            raise ValueError("corner cover witnesses live in star mode")
        rose = self.rose2
        h, p = free_reduce(rose.check(h)), free_reduce(rose.check(p))
        if not h or not p:
            raise ValueError("h and p must be nontrivial")
        rh, _ = free_root(h)
        rp, _ = free_root(p)
        if rh == rp or free_reduce(inverse(rh)) == rp:
            raise ValueError("h and p have the same primitive root")
        lp, lh = tree_length(rose, p), tree_length(rose, h)
        seen = []
        for k in range(1, K + 1):
            g = free_reduce(power(h, k) + power(p, k))
            op = axis_gap(rose, g, p).overlap
            oh = axis_gap(rose, g, h).overlap
            seen.append((k, op, oh))
            if op > lp and oh > lh:
                return k, g, op, oh
        raise ValueError(f"no k <= {K}; overlaps (k, with p, with h): {seen}")


def _positive(r) -> bool:
    return r == INF or r.sign() > 0


def _unit(i: int) -> tuple:
    return (1, 0) if i == 1 else (0, 1)


def classify_sides(r1, r2) -> str:
    inf1, inf2 = r1 == INF, r2 == INF
    p1, p2 = _positive(r1), _positive(r2)
    if inf1 and inf2:
        return "plane"
    if inf1 or inf2:
        other = r2 if inf1 else r1
        return "strip" if _positive(other) else "line"
    if p1 and p2:
        return "rectangle"
    if p1 or p2:
        return "segment"
    return "point"


@dataclass(frozen=True)
class Minset:
    subgroup: BasicZ2
    factor1: Axis | None
    factor2: Axis
    lattice: tuple
    factor_words: tuple

    @property
    def axes(self):
        return self.factor1, self.factor2


@dataclass(frozen=True)
class Side:
    """One side of an intersection rectangle.

    ``gridline_g``/``gridline_h`` are lattice coordinates (in basic generators)
    of the gridline isometries of G and H along this side; ``direction`` is
    +1 when they translate the same way, -1 when opposite, None for sides of
    length zero.
    """

    length: object  # Q2 or inf
    gridline_g: tuple
    gridline_h: tuple
    direction: int | None = None

    def sort_key(self):
        return (self.gridline_g, self.gridline_h)

    def matches(self, other: "Side") -> bool:
        same_len = (self.length == INF and other.length == INF) or (
            self.length != INF and other.length != INF and self.length == other.length)
        return (same_len and self.gridline_g == other.gridline_g
                and self.gridline_h == other.gridline_h and self.direction == other.direction)


@dataclass(frozen=True)
class RectangleReport:
    kind: str
    sides: tuple = ()
    anchor: tuple | None = None
    intersection: tuple | None = None
    notes: tuple = field(default_factory=tuple)

    @property
    def side_lengths(self) -> tuple:
        return tuple(s.length for s in self.sides)

    def same_shape(self, other: "RectangleReport") -> bool:
        if self.kind != other.kind or len(self.sides) != len(other.sides):
            return False
        return all(a.matches(b) for a, b in zip(self.sides, other.sides))

    def to_dict(self) -> dict:
        def fmt(x):
            return "inf" if x == INF else str(x)
        return {
            "kind": self.kind,
            "sides": [
                {"length": fmt(s.length), "gridline_g": list(s.gridline_g),
                 "gridline_h": list(s.gridline_h), "direction": s.direction}
                for s in self.sides
            ],
            "notes": list(self.notes),
        }
