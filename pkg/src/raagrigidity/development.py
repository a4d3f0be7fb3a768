"""Planar developments of piecewise axes, their straightening, and link types.

Angles in links are measured in units of pi/2 (every link edge has length
pi/2), so a link circle has length 4.  Plane geometry runs in mpmath at
``DPS`` digits; lengths stay exact (``RootSum``) whenever the development is
given by exact vectors.
"""
from __future__ import annotations

import csv
import io
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
from mpmath import mpf

from .exact import Q2, RootSum, format_length

DPS = 50


class LinkError(ValueError):
    """The link configuration violates the spanning-geodesic premise."""


class DevelopmentError(ValueError):
    """Bend or slit data that cannot be realized in the plane."""


# ---------------------------------------------------------------------------
# links


@dataclass(frozen=True)
class LinkConfiguration:
    """A link graph, a 4-cycle ``circle`` and a point ``t``.

    ``t`` is ``("vertex", v)`` or ``("edge", (u, w), s)`` with ``0 < s < 1`` the
    fraction of the edge from ``u``.
    """

    vertices: tuple
    edges: frozenset
    circle: tuple
    t: tuple

    @classmethod
    def build(cls, vertices, edges, circle, t):
        return cls(tuple(vertices), frozenset(frozenset(e) for e in edges), tuple(circle), tuple(t))

    def adjacent(self, u, w) -> bool:
        return frozenset((u, w)) in self.edges

    def distance_to_circle(self):
        """Distance from ``t`` to the circle in units of pi/2; ``math.inf`` across components."""
        dist = _graph_distances(self, self.circle)
        if self.t[0] == "vertex":
            d = dist.get(self.t[1])
            return math.inf if d is None else Fraction(d)
        _, (u, w), s = self.t
        s = Fraction(s)
        du, dw = dist.get(u, math.inf), dist.get(w, math.inf)
        return min(s + du, 1 - s + dw)


def _graph_distances(cfg: LinkConfiguration, sources) -> dict:
    nbrs = {v: [] for v in cfg.vertices}
    for e in cfg.edges:
        a, b = tuple(e)
        nbrs[a].append(b)
        nbrs[b].append(a)
    dist = {v: 0 for v in sources}
    frontier = list(sources)
    while frontier:
        nxt = []
        for v in frontier:
            for w in nbrs[v]:
                if w not in dist:
                    dist[w] = dist[v] + 1
                    nxt.append(w)
        frontier = nxt
    return dist


# Theta_2 is K_{3,3}: the circle z0 z1 z2 z3 plus an edge u-w with u ~ z0, z2
# and w ~ z1, z3.  Theta_1 attaches u and w to antipodal circle points only.
THETA2_EDGES = frozenset(frozenset(e) for e in [
    ("z0", "z1"), ("z1", "z2"), ("z2", "z3"), ("z3", "z0"),
    ("u", "w"), ("u", "z0"), ("u", "z2"), ("w", "z1"), ("w", "z3")])
THETA1_EDGES = frozenset(frozenset(e) for e in [
    ("z0", "z1"), ("z1", "z2"), ("z2", "z3"), ("z3", "z0"),
    ("u", "w"), ("u", "z0"), ("w", "z2")])


@dataclass(frozen=True)
class LinkType:
    kind: str  # "type1" or "type2"
    embedding: dict  # vertex of Theta -> vertex of the model graph
    fictitious: tuple = ()  # model edges missing from Theta (type2 only)
    theta_edges: frozenset = frozenset()

    def check(self) -> bool:
        """The embedding is injective and maps every edge of Theta onto a model edge."""
        model = THETA1_EDGES if self.kind == "type1" else THETA2_EDGES
        image = {frozenset(self.embedding[v] for v in e) for e in self.theta_edges}
        if len(set(self.embedding.values())) != len(self.embedding):
            return False
        if not image <= model:
            return False
        if self.kind == "type1":
            return image == model
        return {frozenset(e) for e in self.fictitious} == model - image


def theta(cfg: LinkConfiguration):
    """Vertices and edges of the full subgraph spanned by the circle and the carrier of ``t``."""
    if cfg.t[0] == "vertex":
        extra = (cfg.t[1],)
    else:
        extra = tuple(cfg.t[1])
    verts = tuple(cfg.circle) + extra
    edges = frozenset(frozenset(p) for p in itertools.combinations(verts, 2) if cfg.adjacent(*p))
    return verts, edges


def _circle_maps(circle):
    n = len(circle)
    for shift in range(n):
        for step in (1, -1):
            yield {circle[(shift + step * i) % n]: f"z{i}" for i in range(n)}


def classify_link(cfg: LinkConfiguration) -> LinkType:
    """Identify Theta with Theta_1 or with a subgraph of Theta_2."""
    if len(cfg.circle) != 4 or len(set(cfg.circle)) != 4:
        raise LinkError("the circle must be a 4-cycle (length 2 pi)")
    for a, b in zip(cfg.circle, cfg.circle[1:] + cfg.circle[:1]):
        if not cfg.adjacent(a, b):
            raise LinkError(f"circle vertices {a} and {b} are not adjacent")
    if cfg.distance_to_circle() < 1:
        raise LinkError("t is closer than pi/2 to the circle")
    verts, edges = theta(cfg)
    if cfg.t[0] == "vertex":
        carriers = [{cfg.t[1]: "u"}]
    else:
        u, w = cfg.t[1]
        carriers = [{u: "u", w: "w"}, {u: "w", w: "u"}]
    for model, kind in ((THETA1_EDGES, "type1"), (THETA2_EDGES, "type2")):
        for cmap in _circle_maps(cfg.circle):
            for tmap in carriers:
                emb = {**cmap, **tmap}
                image = {frozenset(emb[v] for v in e) for e in edges}
                if kind == "type1" and image == model:
                    return LinkType("type1", emb, (), edges)
                if kind == "type2" and image <= model:
                    missing = tuple(sorted(tuple(sorted(e)) for e in model - image))
                    return LinkType("type2", emb, missing, edges)
    raise LinkError(f"unclassifiable link span: {sorted(tuple(sorted(e)) for e in edges)}")


def link_configurations(graph):
    """Every valid configuration on a networkx graph: 4-cycles times vertex or edge positions of ``t``."""
    verts = tuple(graph.nodes)
    edges = [tuple(e) for e in graph.edges]
    seen = set()
    for a in verts:
        for b, c in itertools.permutations(graph.neighbors(a), 2):
            for d in set(graph.neighbors(b)) & set(graph.neighbors(c)):
                if d == a:
                    continue
                cyc = (a, b, d, c)
                key = frozenset(frozenset(p) for p in zip(cyc, cyc[1:] + cyc[:1]))
                if key in seen:
                    continue
                seen.add(key)
                base = LinkConfiguration.build(verts, edges, cyc, ("vertex", a))
                ring = set(cyc)
                for v in verts:
                    if v not in ring:
                        yield LinkConfiguration.build(verts, edges, cyc, ("vertex", v))
                for u, w in edges:
                    if u not in ring and w not in ring:
                        yield LinkConfiguration(base.vertices, base.edges, cyc, ("edge", (u, w), Fraction(1, 2)))


# ---------------------------------------------------------------------------
# numbers


def to_mpf(x) -> mpf:
    if isinstance(x, mpf):
        return x
    if isinstance(x, Q2):
        return mpf(x.a.numerator) / x.a.denominator + mpf(x.b.numerator) / x.b.denominator * mpmath.sqrt(2)
    if isinstance(x, RootSum):
        return mpmath.fsum(to_mpf(c) * mpmath.sqrt(to_mpf(r)) for r, c in x.terms.items())
    if isinstance(x, Fraction):
        return mpf(x.numerator) / x.denominator
    if isinstance(x, str):
        return mpf(x)
    return mpf(x)


def _exact(x) -> bool:
    return isinstance(x, (int, Fraction, Q2))


# ---------------------------------------------------------------------------
# Diophantine approximation


@dataclass(frozen=True)
class LatticePoint:
    m: int
    n: int
    residual: mpf  # signed perpendicular offset from the line (positive = left of it)

    @property
    def distance(self) -> mpf:
        return abs(self.residual)


def _convergents(alpha, limit: int = 400):
    """Continued-fraction convergents ``(h, k)`` of ``alpha >= 0``; ``alpha`` Fraction or mpf."""
    h0, h1 = 0, 1
    k0, k1 = 1, 0
    x = alpha
    for _ in range(limit):
        a = int(mpmath.floor(x)) if isinstance(x, mpf) else x.numerator // x.denominator
        h0, h1 = h1, a * h1 + h0
        k0, k1 = k1, a * k1 + k0
        yield h1, k1
        frac = x - a
        if frac == 0 or (isinstance(frac, mpf) and abs(frac) < mpf(10) ** (-DPS + 5)):
            return
        x = 1 / frac


def dirichlet_point(lattice, slope, eps, side: int | None = None) -> LatticePoint:
    """Lattice point ``(m p, n q)`` within ``eps`` of the line ``y = slope x``.

    Walks the continued-fraction convergents of ``slope p / q`` and returns the
    first with ``m >= 1`` whose perpendicular distance is below ``eps`` (or zero
    for a rational match).  ``side`` = +1 / -1 requests a point strictly above /
    below the line.
    """
    p, q = lattice
    with mpmath.workdps(DPS):
        p_m, q_m, s_m = to_mpf(p), to_mpf(q), to_mpf(slope)
        eps_m = to_mpf(eps)
        if eps_m <= 0:
            raise ValueError("eps must be positive")
        sgn = -1 if s_m < 0 else 1
        if all(_is_rational(v) for v in (p, q, slope)):
            alpha = abs(Fraction(_rational(slope)) * _rational(p) / _rational(q))
        else:
            alpha = abs(s_m) * p_m / q_m
        norm = mpmath.sqrt(1 + s_m * s_m)
        for n, m in _convergents(alpha):
            if m < 1:
                continue
            n_signed = sgn * n
            res = (n_signed * q_m - s_m * m * p_m) / norm
            if abs(res) < mpf(10) ** (-DPS + 10):
                res = mpf(0)
            ok_side = side is None or res == 0 or (res > 0) == (side > 0)
            if abs(res) < eps_m and ok_side:
                return LatticePoint(m, n_signed, res)
        raise ValueError("no convergent met the tolerance on the requested side")


def _rational(x) -> Fraction:
    if isinstance(x, Q2):
        return x.a
    return Fraction(x)


# ---------------------------------------------------------------------------
# developments


Point = tuple


@dataclass
class Development:
    """A periodic polyline in the plane.

    ``vectors`` are the displacement vectors of one period (exact ``Q2``
    coordinates or mpf); ``slits`` maps a vertex index within the period (the
    start of ``vectors[i]``) to +1 (slit pointing up, to the left of the
    period direction) or -1 (down).
    """

    vectors: list
    slits: dict = field(default_factory=dict)
    copies: int = 2
    labels: tuple = ()

    def __post_init__(self):
        if self.copies < 2:
            raise DevelopmentError("need at least two copies")
        n = len(self.vectors)
        if n == 0:
            raise DevelopmentError("empty development")
        for i, s in self.slits.items():
            if not 0 <= i < n or s not in (1, -1):
                raise DevelopmentError(f"bad slit {i}: {s}")
        if all(to_mpf(c) == 0 for c in self.period_mp()):
            raise DevelopmentError("zero period")

    @property
    def exact(self) -> bool:
        return all(_exact(c) for v in self.vectors for c in v)

    def period(self) -> tuple:
        x = sum((v[0] for v in self.vectors), Q2(0) if self.exact else mpf(0))
        y = sum((v[1] for v in self.vectors), Q2(0) if self.exact else mpf(0))
        return x, y

    def period_mp(self) -> tuple:
        with mpmath.workdps(DPS):
            return tuple(mpmath.fsum(to_mpf(v[i]) for v in self.vectors) for i in (0, 1))

    def segment_lengths(self) -> list:
        if self.exact:
            return [RootSum.sqrt(Q2.coerce(x) * x + Q2.coerce(y) * y) for x, y in self.vectors]
        with mpmath.workdps(DPS):
            return [mpmath.hypot(to_mpf(x), to_mpf(y)) for x, y in self.vectors]

    def polyline_length(self):
        """Length of one period of the piecewise axis."""
        lengths = self.segment_lengths()
        if self.exact:
            total = RootSum()
            for v in lengths:
                total = total + v
            return total
        return mpmath.fsum(lengths)

    def translation_length(self):
        """Length of the period vector."""
        if self.exact:
            x, y = self.period()
            return RootSum.sqrt(Q2.coerce(x) * x + Q2.coerce(y) * y)
        return mpmath.hypot(*self.period_mp())

    def vertices(self, start: int = 0, periods: int | None = None) -> list:
        """Planar vertices for ``periods`` copies starting at copy ``start`` (mpf pairs)."""
        periods = self.copies if periods is None else periods
        with mpmath.workdps(DPS):
            px, py = self.period_mp()
            vecs = [(to_mpf(x), to_mpf(y)) for x, y in self.vectors]
            x, y = px * start, py * start
            pts = [(x, y)]
            for _ in range(periods):
                for vx, vy in vecs:
                    x, y = x + vx, y + vy
                    pts.append((x, y))
            return pts

    def frame(self):
        """Unit period direction ``e1`` and its left normal ``e2``."""
        with mpmath.workdps(DPS):
            px, py = self.period_mp()
            r = mpmath.hypot(px, py)
            return (px / r, py / r), (-py / r, px / r)

    def heights(self) -> list:
        """Signed offsets of one period's vertices along the left normal."""
        _, e2 = self.frame()
        return [x * e2[0] + y * e2[1] for x, y in self.vertices(0, 1)[:-1]]

    def strip(self):
        """``(L1, L2)`` offsets of the bounding lines (``L1`` on the left) and the width."""
        hs = self.heights()
        return max(hs), min(hs), max(hs) - min(hs)


def develop(lengths, turns, slits=None, copies: int = 2, heading=0, labels=()) -> Development:
    """Development from segment lengths and signed turning angles.

    ``turns[i]`` is the turn (radians, counterclockwise positive, 0 = straight)
    taken at the start of segment ``i``, so the planar angle there is
    ``pi - |turns[i]|``.  Turns must lie strictly between ``-pi`` and ``pi`` and
    sum to zero over a period, which is what makes the translates parallel.
    """
    if len(lengths) != len(turns):
        raise DevelopmentError("one turn per segment")
    if any(to_mpf(x) < 0 for x in lengths):
        raise DevelopmentError("negative segment length")
    with mpmath.workdps(DPS):
        ts = [to_mpf(t) for t in turns]
        if any(abs(t) >= mpmath.pi for t in ts):
            raise DevelopmentError("planar angle must be positive")
        if abs(mpmath.fsum(ts)) > mpf(10) ** (-DPS // 2):
            raise DevelopmentError("turns do not close up: translates would not be parallel")
        if all(t == 0 for t in ts) and all(_exact(x) for x in lengths) and heading == 0:
            vectors = [(Q2.coerce(x), Q2(0)) for x in lengths]
        else:
            h = to_mpf(heading)
            vectors = []
            for L, t in zip(lengths, ts):
                h += t
                L = to_mpf(L)
                vectors.append((L * mpmath.cos(h), L * mpmath.sin(h)))
    return Development(vectors, dict(slits or {}), copies, tuple(labels))


def piecewise_axis(lg, lh, d, turns=(0, 0, 0, 0), slits=None, copies: int = 2) -> Development:
    """One period ``alpha, gamma, beta, gamma-bar`` with lengths ``l(g), d, l(h), d``."""
    if to_mpf(d) <= 0:
        raise DevelopmentError("d must be positive")
    return develop([lg, d, lh, d], turns, slits, copies, labels=("alpha", "gamma", "beta", "gamma'"))


def staircase(lg, lh, d, copies: int = 2) -> Development:
    """Tree-case development: every planar angle is pi, so the steps line up."""
    return piecewise_axis(lg, lh, d, copies=copies)


def bend_fixture(eps, lattice=(1, Q2(0, 1)), spanning=(1, 1), copies: int = 3) -> Development:
    """Product-of-trees development ``alpha, gamma, beta, gamma`` with ``alpha = beta``.

    ``gamma`` is the spanning vector; ``alpha`` is the lattice vector from
    :func:`dirichlet_point` nearest the direction of ``gamma``.
    """
    p, q = lattice
    gx, gy = (Q2.coerce(c) for c in spanning)
    slope = gy / gx
    pt = dirichlet_point(lattice, slope, eps)
    alpha = (Q2.coerce(p) * pt.m, Q2.coerce(q) * pt.n)
    return Development([alpha, (gx, gy), alpha, (gx, gy)], {}, copies, ("alpha", "gamma", "beta", "gamma'"))


# ---------------------------------------------------------------------------
# straightening


@dataclass
class Straightened:
    path: list  # planar points of one period, first == last shifted by the period
    translation_length: object  # RootSum when exact, else mpf
    hausdorff: mpf
    bends: tuple  # vertex indices (within the period) where the path bends
    height: mpf | None = None  # offset of the path when it is a straight line


def _taut(points, start, end):
    """Shortest x-monotone path from ``start`` to ``end`` with ``lo <= y <= hi`` at each ``(x, lo, hi, tag)``."""
    pts = sorted(points) + [(end[0], end[1], end[1], None)]
    path = [(start[0], start[1], None)]
    ax, ay = start
    i = 0
    while i < len(pts):
        lo_s, lo_j = -mpmath.inf, None
        hi_s, hi_j = mpmath.inf, None
        j = i
        restart = None
        while j < len(pts):
            x, lo, hi, _ = pts[j]
            dx = x - ax
            if dx <= 0:
                if lo > ay or hi < ay:
                    raise DevelopmentError("slits sever the strip")
                j += 1
                continue
            sl = (lo - ay) / dx if lo != -mpmath.inf else -mpmath.inf
            su = (hi - ay) / dx if hi != mpmath.inf else mpmath.inf
            if sl > hi_s:
                restart, use_hi = hi_j, True
                break
            if su < lo_s:
                restart, use_hi = lo_j, False
                break
            if sl >= lo_s:
                lo_s, lo_j = sl, j
            if su <= hi_s:
                hi_s, hi_j = su, j
            j += 1
        if restart is None:
            break
        x, lo, hi, tag = pts[restart]
        ax, ay = x, (hi if use_hi else lo)
        path.append((ax, ay, tag))
        i = restart + 1
    path.append((end[0], end[1], None))
    return path


def straighten(dev: Development) -> Straightened:
    """Shortest period-invariant path in the strip that crosses no slit.

    A slit pointing down (-1) at a vertex blocks the strip below it, so the
    path passes on or above that vertex; a slit pointing up blocks above.
    Without slits the result is the bounding line ``L1``.
    """
    with mpmath.workdps(DPS):
        e1, e2 = dev.frame()
        verts = dev.vertices(0, 1)[:-1]
        T = mpmath.hypot(*dev.period_mp())
        X = [x * e1[0] + y * e1[1] for x, y in verts]
        Y = [x * e2[0] + y * e2[1] for x, y in verts]
        L1, L2, _ = dev.strip()
        lows = [(X[i], Y[i], i) for i, s in dev.slits.items() if s == -1]
        highs = [(X[i], Y[i], i) for i, s in dev.slits.items() if s == 1]
        top = max((y for _, y, _ in lows), default=None)
        bottom = min((y for _, y, _ in highs), default=None)
        if top is None and bottom is None:
            height = L1
        elif top is None:
            height = bottom
        elif bottom is None or top <= bottom:
            height = top
        else:
            height = None
        if height is not None:
            p0 = (e1[0] * X[0] + e2[0] * height, e1[1] * X[0] + e2[1] * height)
            path = [p0, (p0[0] + e1[0] * T, p0[1] + e1[1] * T)]
            plane = [(X[0], height), (X[0] + T, height)]
            bends = ()
            length = dev.translation_length()
        else:
            x0, _, i0 = max(lows, key=lambda t: (t[1], -t[2]))
            cons = {}
            for x, y, i in lows + highs:
                xs = x0 + ((x - x0) % T)
                if i == i0:
                    continue
                lo, hi, tags = cons.get(xs, (-mpmath.inf, mpmath.inf, ()))
                if dev.slits[i] == -1:
                    lo = max(lo, y)
                else:
                    hi = min(hi, y)
                cons[xs] = (lo, hi, tags + (i,))
            for xs, (lo, hi, _) in cons.items():
                if lo > hi:
                    raise DevelopmentError("slits sever the strip")
            pts = [(x, lo, hi, tags[0]) for x, (lo, hi, tags) in cons.items()]
            taut = _taut(pts, (x0, top), (x0 + T, top))
            plane = [(x, y) for x, y, _ in taut]
            bends = (i0,) + tuple(t for _, _, t in taut[1:-1])
            path = [(e1[0] * x + e2[0] * y, e1[1] * x + e2[1] * y) for x, y in plane]
            length = mpmath.fsum(mpmath.hypot(b[0] - a[0], b[1] - a[1]) for a, b in zip(plane, plane[1:]))
        h = _periodic_hausdorff(dev, path)
    return Straightened(path, length, h, bends, height)


# ---------------------------------------------------------------------------
# Hausdorff distance between periodic polylines


def _segment_point_distance(p, a, b):
    dx, dy = b[0] - a[0], b[1] - a[1]
    L2 = dx * dx + dy * dy
    t = 0 if L2 == 0 else max(0, min(1, ((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / L2))
    return mpmath.hypot(p[0] - a[0] - t * dx, p[1] - a[1] - t * dy)


def _polyline_distance(p, segs):
    return min(_segment_point_distance(p, a, b) for a, b in segs)


def _tie_parameters(a, u, segs):
    """Parameters on ``a + t u`` (``0 <= t <= 1``) where two features of ``segs`` are equidistant."""
    pts = {q for s in segs for q in s}
    lines = []
    for q0, q1 in segs:
        dx, dy = q1[0] - q0[0], q1[1] - q0[1]
        r = mpmath.hypot(dx, dy)
        if r:
            lines.append((q0, (-dy / r, dx / r)))
    out = []

    def add(t):
        if 0 <= t <= 1:
            out.append(t)

    pts = list(pts)
    # point-point: linear
    for P, Q in itertools.combinations(pts, 2):
        c1 = 2 * ((Q[0] - P[0]) * u[0] + (Q[1] - P[1]) * u[1])
        c0 = (a[0] - P[0]) ** 2 + (a[1] - P[1]) ** 2 - (a[0] - Q[0]) ** 2 - (a[1] - Q[1]) ** 2
        if c1:
            add(-c0 / c1)
    # point-line: quadratic
    for P in pts:
        for Q, n in lines:
            ku = n[0] * u[0] + n[1] * u[1]
            k0 = n[0] * (a[0] - Q[0]) + n[1] * (a[1] - Q[1])
            A = u[0] ** 2 + u[1] ** 2 - ku * ku
            B = 2 * ((a[0] - P[0]) * u[0] + (a[1] - P[1]) * u[1]) - 2 * ku * k0
            C = (a[0] - P[0]) ** 2 + (a[1] - P[1]) ** 2 - k0 * k0
            if abs(A) > mpf(10) ** (-DPS // 2):
                disc = B * B - 4 * A * C
                if disc >= 0:
                    r = mpmath.sqrt(disc)
                    add((-B + r) / (2 * A))
                    add((-B - r) / (2 * A))
            elif B:
                add(-C / B)
    # line-line: two linear equations
    for (Q1, n1), (Q2_, n2) in itertools.combinations(lines, 2):
        for sgn in (1, -1):
            c1 = (n1[0] - sgn * n2[0]) * u[0] + (n1[1] - sgn * n2[1]) * u[1]
            c0 = (n1[0] * (a[0] - Q1[0]) + n1[1] * (a[1] - Q1[1])
                  - sgn * (n2[0] * (a[0] - Q2_[0]) + n2[1] * (a[1] - Q2_[1])))
            if c1:
                add(-c0 / c1)
    return out


def directed_hausdorff(A_segs, B_segs) -> mpf:
    """``sup_{a in A} d(a, B)`` for finite unions of segments.

    Along a segment of ``A`` the distance to ``B`` is a minimum of convex
    functions (one per vertex and per segment line of ``B``), so its maximum sits
    at an endpoint or where two of them tie; all such points are examined.
    """
    best = mpf(0)
    for a, b in A_segs:
        u = (b[0] - a[0], b[1] - a[1])
        for t in [mpf(0), mpf(1)] + _tie_parameters(a, u, B_segs):
            p = (a[0] + t * u[0], a[1] + t * u[1])
            best = max(best, _polyline_distance(p, B_segs))
    return best


def _segments(points):
    return list(zip(points, points[1:]))


def _shift(points, v, k):
    return [(x + k * v[0], y + k * v[1]) for x, y in points]


def _periodic_hausdorff(dev: Development, path) -> mpf:
    P = dev.period_mp()
    poly = dev.vertices(0, 1)
    poly3 = dev.vertices(-1, 3)
    path3 = _shift(path, P, -1)[:-1] + path[:-1] + _shift(path, P, 1)
    return max(directed_hausdorff(_segments(poly), _segments(path3)),
               directed_hausdorff(_segments(path), _segments(poly3)))


def hausdorff(dev: Development, st: Straightened) -> mpf:
    return _periodic_hausdorff(dev, st.path)


# ---------------------------------------------------------------------------
# the 8 eps bound


@dataclass(frozen=True)
class BoundCheck:
    ok: bool
    residual: object  # exact when the development is
    segment_excess: tuple  # per segment: length minus its projection on the axis


def length_bound_check(dev: Development, st: Straightened, eps) -> BoundCheck:
    """Check ``l(g) + l(h) + 2d <= l(gh) + 8 eps`` on a development.

    Each segment may exceed its projection on the straightened axis by at most
    ``2 eps``; ``residual`` is the period length of the polyline minus that of
    the straightened path.
    """
    with mpmath.workdps(DPS):
        e1, _ = dev.frame()
        excess = []
        for (x, y), L in zip(dev.vectors, dev.segment_lengths()):
            proj = abs(to_mpf(x) * e1[0] + to_mpf(y) * e1[1])
            excess.append(to_mpf(L) - proj)
        poly = dev.polyline_length()
        tl = st.translation_length
        if isinstance(poly, RootSum) and isinstance(tl, RootSum):
            residual = poly - tl
            sign_ok = residual.sign() >= 0
            bound_ok = residual <= RootSum.const(Q2.coerce(_as_fraction(eps)) * 8) if _is_rational(eps) \
                else to_mpf(residual) <= 8 * to_mpf(eps)
        else:
            residual = to_mpf(poly) - to_mpf(tl)
            sign_ok = residual >= -mpf(10) ** (-DPS // 2)
            bound_ok = residual <= 8 * to_mpf(eps)
        tol = mpf(10) ** (-DPS // 2)
        seg_ok = all(e <= 2 * to_mpf(eps) + tol for e in excess)
    return BoundCheck(bool(sign_ok and bound_ok and seg_ok), residual, tuple(excess))


def _is_rational(x) -> bool:
    return isinstance(x, (int, Fraction)) or (isinstance(x, Q2) and x.is_rational)


def _as_fraction(x) -> Fraction:
    return x.a if isinstance(x, Q2) else Fraction(x)


# ---------------------------------------------------------------------------
# export


def to_csv(dev: Development, st: Straightened | None = None) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["curve", "index", "x", "y", "slit"])
    for k, (x, y) in enumerate(dev.vertices()):
        slit = dev.slits.get(k % len(dev.vectors), 0)
        w.writerow(["polyline", k, mpmath.nstr(x, 15), mpmath.nstr(y, 15), slit])
    if st is not None:
        for k, (x, y) in enumerate(st.path):
            w.writerow(["axis", k, mpmath.nstr(x, 15), mpmath.nstr(y, 15), 0])
    return buf.getvalue()


def to_svg(dev: Development, st: Straightened | None = None, size: int = 600) -> str:
    pts = [(float(x), float(y)) for x, y in dev.vertices()]
    curves = [pts]
    if st is not None:
        P = dev.period_mp()
        path = list(st.path)
        for k in range(1, dev.copies):
            path += _shift(st.path, P, k)[1:]
        curves.append([(float(x), float(y)) for x, y in path])
    xs = [x for c in curves for x, _ in c]
    ys = [y for c in curves for _, y in c]
    span = max(max(xs) - min(xs), max(ys) - min(ys), 1e-12)
    scale = (size - 40) / span

    def fmt(c):
        return " ".join(f"{20 + (x - min(xs)) * scale:.3f},{size - 20 - (y - min(ys)) * scale:.3f}" for x, y in c)

    lines = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}">',
             f'<polyline points="{fmt(curves[0])}" fill="none" stroke="black"/>']
    if len(curves) > 1:
        lines.append(f'<polyline points="{fmt(curves[1])}" fill="none" stroke="red" stroke-dasharray="4 2"/>')
    n = len(dev.vectors)
    for k, (x, y) in enumerate(pts[:-1]):
        s = dev.slits.get(k % n)
        if s:
            cx, cy = 20 + (x - min(xs)) * scale, size - 20 - (y - min(ys)) * scale
            lines.append(f'<line x1="{cx:.3f}" y1="{cy:.3f}" x2="{cx:.3f}" y2="{cy - 15 * s:.3f}" stroke="blue"/>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def describe(dev: Development, st: Straightened, eps=None) -> dict:
    out = {
        "segments": len(dev.vectors),
        "polyline_length": _fmt(dev.polyline_length()),
        "translation_length": _fmt(st.translation_length),
        "strip_width": mpmath.nstr(dev.strip()[2], 12),
        "hausdorff": mpmath.nstr(st.hausdorff, 12),
        "bends": list(st.bends),
    }
    if eps is not None:
        chk = length_bound_check(dev, st, eps)
        out["residual"] = _fmt(chk.residual)
        out["bound_ok"] = chk.ok
    return out


def _fmt(x) -> str:
    return format_length(x) if isinstance(x, RootSum) else mpmath.nstr(x, 15)
