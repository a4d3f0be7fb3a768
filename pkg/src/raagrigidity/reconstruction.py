"""Recovering geometry from a translation length function alone.

Everything in this module talks to the action only through a
:class:`LengthOracle`.  Geometric models enter solely to build charts and to
check them; the data the charts are built from is oracle-derived.
"""
from __future__ import annotations

import itertools
import logging
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .exact import Q2, RootSum, format_length, parse_length
from .product import ProductComplex, RectangleReport, Side, classify_sides
from .trees import INF, axis_coordinate, axis_point
from .words import RAAG, BasicZ2, format_word, inverse, parse_word

log = logging.getLogger(__name__)


class OracleError(LookupError):
    """The oracle cannot evaluate a word."""


class ReconstructionError(RuntimeError):
    """Oracle data is inconsistent with the requested reconstruction."""


# ---------------------------------------------------------------------------
# oracles


class LengthOracle:
    """A map from words to exact nonnegative lengths.

    ``provenance`` is ``"geometric"`` (backed by ``model``), ``"table"`` or
    ``"adversarial"``.  Values are cached per word.
    """

    def __init__(self, evaluate, provenance: str = "adversarial", model=None, tolerance: float = 0.0):
        self._evaluate = evaluate
        self.provenance = provenance
        self.model = model
        self.tolerance = tolerance
        self._cache: dict = {}

    def __call__(self, w) -> RootSum:
        w = tuple(w)
        try:
            return self._cache[w]
        except KeyError:
            pass
        v = self._evaluate(w)
        if not isinstance(v, RootSum):
            v = RootSum.coerce(v)
        self._cache[w] = v
        return v

    def agrees(self, other: "LengthOracle", w) -> bool:
        a, b = self(w), other(w)
        tol = max(self.tolerance, other.tolerance)
        if tol:
            return abs(float(a) - float(b)) <= tol
        return a == b


def geometric_oracle(X: ProductComplex) -> LengthOracle:
    return LengthOracle(X.length, "geometric", model=X)


def table_oracle(group: RAAG, table: dict, tolerance: float = 1e-12) -> LengthOracle:
    """Oracle from ``{word: length}``; lookups go through conjugacy-class cores."""
    canon = {}
    for w, v in table.items():
        core = group.cyclic_reduce(w).core
        canon[core] = RootSum.coerce(v)
        canon[group.cyclic_reduce(inverse(w)).core] = RootSum.coerce(v)

    def evaluate(w):
        core = group.cyclic_reduce(w).core
        if not core:
            return RootSum()
        try:
            return canon[core]
        except KeyError:
            raise OracleError(f"no table entry for {format_word(w)}") from None

    return LengthOracle(evaluate, "table", tolerance=tolerance)


def parse_table(text: str) -> dict:
    """Read ``word<TAB>length`` lines (``#`` comments allowed)."""
    out = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        if "\t" not in line:
            raise ValueError(f"line {lineno}: expected 'word<TAB>length'")
        w, v = line.split("\t", 1)
        out[parse_word(w)] = parse_length(v.strip())
    return out


def format_table(rows) -> str:
    return "".join(f"{format_word(w)}\t{format_length(v)}\n" for w, v in rows)


# ---------------------------------------------------------------------------
# distances between minsets


@dataclass
class GapEstimate:
    """Lower bound for ``2d = sup{l(gh) - l(g) - l(h)}`` over a lattice ball.

    ``best`` estimates twice the distance between the minsets; ``history`` is
    ``[(radius, best)]``; ``attained`` is set only when ``best`` equals an
    independently supplied target exactly.
    """

    best: RootSum
    witnesses: tuple
    budget: int
    attained: bool = False
    history: list = field(default_factory=list)

    @property
    def intersecting(self) -> bool:
        return self.best.sign() <= 0

    @property
    def distance(self) -> RootSum:
        return RootSum() if self.best.sign() <= 0 else self.best * Fraction(1, 2)

    def increments(self, k: int = 3) -> list:
        vals = [b for _, b in self.history]
        return [float(b - a) for a, b in zip(vals, vals[1:])][-k:]


def _shell(n: int):
    rng = range(-n, n + 1)
    for t in itertools.product(rng, repeat=4):
        if max(map(abs, t)) == n:
            yield t


def _rescaled(part, n):
    m = max(map(abs, part))
    return tuple(part) if m == 0 else tuple(round(x * n / m) for x in part)


def _scaled_neighbours(t, n):
    """Rescale ``g``, ``h`` or both to radius ``n``, then step by one in every coordinate.

    Scaling the halves separately lets ``g`` and ``h`` settle at different
    radii, which the optimum needs when the two lattices are unequal.
    """
    g, h = t[:2], t[2:]
    bases = {_rescaled(g, n) + _rescaled(h, n), _rescaled(g, n) + h, g + _rescaled(h, n)}
    for base in bases:
        for d in itertools.product((-1, 0, 1), repeat=4):
            c = tuple(b + e for b, e in zip(base, d))
            if 0 < max(map(abs, c)) <= n:
                yield c


def _slope_matches(sigma, unit, n, signs, keep=2):
    """Lattice points within radius ``n`` whose metric slope is closest to ``sigma``.

    ``unit`` holds the lengths of the two basic generators, so ``(i, j)`` has
    factor lengths ``(|i| u1, |j| u2)``.  Walking ``i`` and ``j`` and rounding
    the other coordinate visits every best approximation, like the
    convergents of a continued fraction.
    """
    u1, u2 = unit
    if sigma <= 0 or u1 <= 0 or u2 <= 0:
        return []
    pts = set()
    for i in range(1, n + 1):
        j = round(sigma * i * u1 / u2)
        if 0 < j <= n:
            pts.add((i, j))
    for j in range(1, n + 1):
        i = round(j * u2 / (sigma * u1))
        if 0 < i <= n:
            pts.add((i, j))
    ranked = sorted(pts, key=lambda p: (abs(math.log(p[1] * u2 / (p[0] * u1) / sigma)), p))
    si, sj = signs
    return [(si * i, sj * j) for i, j in ranked[:keep]]


def _metric_slope(part, unit):
    i, j = part
    if not i or not j:
        return None
    return abs(j) * unit[1] / (abs(i) * unit[0])


def _signs(part):
    return tuple(-1 if x < 0 else 1 for x in part)


def minset_gap(oracle: LengthOracle, G: BasicZ2, H: BasicZ2, budget: int = 50, *,
               exhaustive: int = 2, beam: int = 8, target=None) -> GapEstimate:
    """Search ``l(gh) - l(g) - l(h)`` over ``g = g1^i g2^j``, ``h = h1^k h2^m``.

    Radii up to ``exhaustive`` are enumerated completely; beyond that a beam of
    the best witnesses is rescaled to each new radius and perturbed by one
    step in every coordinate, and each witness also proposes the lattice
    points of ``G`` and ``H`` whose metric slopes best match its own.  ``best`` is nondecreasing in the radius.  When
    ``target`` (an independent value of ``2d``) is given, the search stops at
    the first radius where ``best == target`` and sets ``attained``.
    """
    if budget < 1:
        raise ValueError("budget must be positive")
    approx: dict = {}  # float estimates; exact values are built only near the maximum

    def terms(t):
        i, j, k, m = t
        g = G.element(i, j)
        h = H.element(k, m)
        return oracle(g + h), oracle(g), oracle(h)

    def estimate(t):
        if t not in approx:
            a, b, c = (float(x) for x in terms(t))
            approx[t] = (a - b - c, a + b + c)
        return approx[t][0]

    unit_g = (float(oracle(G.element(1, 0))), float(oracle(G.element(0, 1))))
    unit_h = (float(oracle(H.element(1, 0))), float(oracle(H.element(0, 1))))
    best = None
    best_f = -float("inf")
    best_t = None
    history = []
    target = None if target is None else RootSum.coerce(target)
    attained = False
    for n in range(1, budget + 1):
        if n <= exhaustive:
            cands = _shell(n)
        else:
            ranked = sorted(approx, key=lambda t: (-approx[t][0], t))[:beam]
            pool = {c for t in ranked for c in _scaled_neighbours(t, n)}
            for t in ranked:
                g, h = t[:2], t[2:]
                for sigma in {_metric_slope(g, unit_g), _metric_slope(h, unit_h)} - {None}:
                    gs = _slope_matches(sigma, unit_g, n, _signs(g))
                    hs = _slope_matches(sigma, unit_h, n, _signs(h))
                    pool.update(a + h for a in gs)
                    pool.update(g + b for b in hs)
                    pool.update(a + b for a in gs for b in hs)
            cands = sorted(pool)
        for t in cands:
            f = estimate(t)
            if f < best_f - 1e-9 * (approx[t][1] + 1):
                continue
            a, b, c = terms(t)
            v = a - b - c
            # candidates arrive in lexicographic order, so ties keep the
            # lexicographically least witness of the smallest radius
            if best is None or v > best:
                best, best_f, best_t = v, float(v), t
        history.append((n, best))
        if target is not None and best == target:
            attained = True
            break
    i, j, k, m = best_t
    return GapEstimate(best, ((i, j), (k, m)), budget, attained, history)


class DistanceBook:
    """Memoized minset distances ``d(M_A, M_B)`` computed from an oracle."""

    def __init__(self, oracle: LengthOracle, group: RAAG, budget: int = 2, exhaustive: int = 1, beam: int = 6):
        self.oracle = oracle
        self.group = group
        self.budget = budget
        self.exhaustive = exhaustive
        self.beam = beam
        self._memo: dict = {}

    def _key(self, A: BasicZ2):
        c = self.group.normal_form(A.conjugator)
        return (A.gen1, A.gen2, c)

    def __call__(self, A: BasicZ2, B: BasicZ2) -> RootSum:
        key = (self._key(A), self._key(B))
        if key not in self._memo:
            est = minset_gap(self.oracle, A, B, self.budget, exhaustive=self.exhaustive, beam=self.beam)
            self._memo[key] = est.distance
        return self._memo[key]


# ---------------------------------------------------------------------------
# rectangles


# grid directions of a flat in a product of trees are the factor directions
_DIRECTIONS = ((1, 0), (0, 1))


def _normalize_direction(v):
    i, j = v
    if i < 0 or (i == 0 and j < 0):
        return (-i, -j), -1
    return (i, j), 1


@dataclass
class _Gridline:
    coords: tuple
    side: RootSum  # length of the rectangle side it runs along
    exponent: int  # a power e with R and g^e R disjoint


def _find_gridlines(oracle, dist, A: BasicZ2, B: BasicZ2, max_exp: int = 64):
    """Gridline directions of A relative to ``R = M_A ∩ M_B`` and the side lengths along them.

    Uses ``l(g) + d(R, gR) <= d(R, g^2 R)``, with equality exactly for axes
    through two corners of R; ``d(R, gR)`` is read as ``d(M_B, g M_B)``.
    """
    found = []
    for v in _DIRECTIONS:
        for e in range(1, max_exp + 1):
            g = A.element(v[0] * e, v[1] * e)
            D = dist(B, B.conjugate(g))
            if D.sign() > 0:
                break
        else:
            continue
        g2 = A.element(2 * v[0] * e, 2 * v[1] * e)
        lg = oracle(g)
        if (lg + D) == dist(B, B.conjugate(g2)):
            found.append(_Gridline(v, lg - D, e))
    found.sort(key=lambda x: (float(x.side), x.coords))
    chosen = []
    for cand in found:
        if all(cand.coords[0] * c.coords[1] != cand.coords[1] * c.coords[0] for c in chosen):
            chosen.append(cand)
        if len(chosen) == 2:
            break
    return chosen


def _power_exceeding(oracle, A: BasicZ2, v, r) -> int:
    e = 1
    while not oracle(A.element(v[0] * e, v[1] * e)) > r:
        e += 1
    return e


def _match(oracle, dist, G, H, g_line: _Gridline, h_line: _Gridline):
    """``None`` if the gridlines run along different sides, else +1/-1 for same/opposite direction."""
    r = g_line.side
    e = _power_exceeding(oracle, G, g_line.coords, r)
    f = _power_exceeding(oracle, H, h_line.coords, r)
    g = G.element(g_line.coords[0] * e, g_line.coords[1] * e)
    h = H.element(h_line.coords[0] * f, h_line.coords[1] * f)
    hi = H.element(-h_line.coords[0] * f, -h_line.coords[1] * f)
    plus = dist(H.conjugate(g), G.conjugate(h))
    minus = dist(H.conjugate(g), G.conjugate(hi))
    if plus == minus:
        return None
    return 1 if plus < minus else -1


def reconstruct_rectangle(oracle: LengthOracle, group: RAAG, G: BasicZ2, H: BasicZ2,
                          budget: int = 3, book: DistanceBook | None = None) -> RectangleReport:
    """Shape of ``M_G ∩ M_H`` (kind, side lengths, gridlines, directions) from lengths only.

    ``book`` lets several reconstructions against the same oracle share
    memoized minset distances.
    """
    dist = book if book is not None else DistanceBook(oracle, group)
    common = group.subgroup_intersection(G, H)
    if common == "equal":
        sides = []
        for v in ((1, 0), (0, 1)):
            a, b = G.element(*v), H.element(*v)
            rel = group.power_relation(a, b)
            sides.append(Side(INF, v, v, 1 if rel[0] * rel[1] > 0 else -1))
        return RectangleReport("plane", tuple(sorted(sides, key=Side.sort_key)))

    gap = minset_gap(oracle, G, H, budget, exhaustive=min(budget, 2))
    if not gap.intersecting:
        raise ReconstructionError(f"minsets are at distance {format_length(gap.distance)}")

    if common is not None:
        return _reconstruct_strip(oracle, group, dist, G, H, common)

    # point test along the basic generators
    if all(oracle(A) == dist(H, H.conjugate(A)) for A in (G.element(1, 0), G.element(0, 1))):
        return RectangleReport("point", ())

    g_lines = _find_gridlines(oracle, dist, G, H)
    h_lines = _find_gridlines(oracle, dist, H, G)
    if len(g_lines) < 2 or len(h_lines) < 2:
        raise ReconstructionError("no gridline certificate within the search box")
    pairs = {}
    for gl in g_lines:
        if gl.side.sign() <= 0:
            continue
        for hl in h_lines:
            d = _match(oracle, dist, G, H, gl, hl)
            if d is not None:
                pairs[gl.coords] = (hl, d)
    if not pairs:
        raise ReconstructionError("could not match gridlines of G and H")
    if len(pairs) == 1:
        (gc, (hl, _)), = pairs.items()
        other_g = next(x for x in g_lines if x.coords != gc)
        other_h = next(x for x in h_lines if x.coords != hl.coords)
        pairs[other_g.coords] = (other_h, None)
    sides = []
    for gl in g_lines:
        hl, d = pairs[gl.coords]
        if not (gl.side == hl.side):
            raise ReconstructionError("side lengths seen from G and H disagree")
        gc, sg = _normalize_direction(gl.coords)
        hc, sh = _normalize_direction(hl.coords)
        direction = None if d is None else d * sg * sh
        sides.append(Side(_as_q2(gl.side), gc, hc, direction))
    r1, r2 = (s.length for s in sides)
    kind = classify_sides(r1, r2)
    return RectangleReport(kind, tuple(sorted(sides, key=Side.sort_key)))


def _as_q2(x: RootSum):
    v = x.rational_value()
    return v if v is not None else x


def _reconstruct_strip(oracle, group, dist, G, H, common) -> RectangleReport:
    def along(A: BasicZ2):
        for v in ((1, 0), (0, 1)):
            rel = group.power_relation(A.element(*v), common)
            if rel is not None:
                return v, rel
        raise ReconstructionError("common element is not a basic generator power")

    gv, (gm, gn) = along(G)
    hv, (hm, hn) = along(H)
    # G-gen^gm = common^gn and H-gen^hm = common^hn
    same = (gm * gn > 0) == (hm * hn > 0)
    c2 = oracle(common) * oracle(common)

    go = (0, 1) if gv == (1, 0) else (1, 0)
    ho = (0, 1) if hv == (1, 0) else (1, 0)
    for A, v in ((G, go), (H, ho)):
        g = A.element(*v)
        lhs = oracle(g + common)
        if not (lhs * lhs == oracle(g) * oracle(g) + c2):
            raise ReconstructionError("basic generator is not orthogonal to the common axis")
    # width across the strip
    for e in range(1, 65):
        g = G.element(go[0] * e, go[1] * e)
        D = dist(H, H.conjugate(g))
        if D.sign() > 0:
            break
    width = oracle(g) - D
    sides = [Side(INF, gv, hv, 1 if same else -1)]
    if width.sign() > 0:
        d = _match(oracle, dist, G, H, _Gridline(go, width, e), _Gridline(ho, width, 1))
        sides.append(Side(_as_q2(width), go, ho, d))
        kind = "strip"
    else:
        sides.append(Side(Q2(0), go, ho, None))
        kind = "line"
    return RectangleReport(kind, tuple(sorted(sides, key=Side.sort_key)), intersection=common)


# ---------------------------------------------------------------------------
# star case


@dataclass(frozen=True)
class StarRow:
    word: tuple
    shear: RootSum  # lambda(g)
    tree_length: RootSum  # l_rho(g)


def _square(x: RootSum) -> Q2:
    sr = x.single_root()
    if sr is None:
        raise ReconstructionError(f"length {x} is not a single square root")
    return sr[1]


def star_reconstruct(oracle: LengthOracle, v, words) -> list:
    """``lambda(g)`` and ``l_rho(g)`` from ``l(v)``, ``l(g)``, ``l(gv)``."""
    lv = oracle(((v, 1),))
    lv2 = _square(lv)
    if lv2.sign() <= 0:
        raise ReconstructionError("l(v) must be positive")
    rows = []
    for w in words:
        w = tuple(w)
        lg2 = _square(oracle(w))
        lgv2 = _square(oracle(w + ((v, 1),)))
        num = lgv2 - lg2 - lv2
        shear = RootSum.const(num) / (lv * 2)
        rho2 = lg2 - num * num / (lv2 * 4)
        if rho2.sign() < 0:
            raise ReconstructionError(f"l(g)^2 < lambda(g)^2 for {format_word(w)}")
        rows.append(StarRow(w, shear, RootSum.sqrt(rho2)))
    return rows


# ---------------------------------------------------------------------------
# equivariant isometries


@dataclass
class MismatchReport:
    witness: object  # a word, or a pair of subgroups
    value_a: object
    value_b: object
    reason: str = "length"

    def __str__(self):
        if self.reason == "length":
            return (f"length functions differ at {format_word(self.witness)}: "
                    f"{format_length(self.value_a)} != {format_length(self.value_b)}")
        G, H = self.witness
        return f"rectangle data differ for {G} and {H}: {self.value_a} != {self.value_b}"


class CoverageError(ReconstructionError):
    def __init__(self, subgroup):
        super().__init__(f"minset of {subgroup} meets no other family member in a compact rectangle")
        self.subgroup = subgroup


@dataclass
class Chart:
    """Identification of ``M_H`` in two models: coordinates along the basic
    generators' translation directions, measured from the low corner of
    ``M_H ∩ M_ref``."""

    subgroup: BasicZ2
    reference: BasicZ2
    anchor_a: tuple  # axis positions of the low corner in model A
    anchor_b: tuple

    def point(self, X: ProductComplex, anchor, coords) -> tuple:
        M = X.minset(self.subgroup)
        return tuple(axis_point(rose, ax, 0, a + c)
                     for rose, ax, a, c in zip((X.rose1, X.rose2), M.axes, anchor, coords))


@dataclass
class IsometryChart:
    charts: list
    checks: dict
    ok: bool

    def chart_for(self, H: BasicZ2) -> Chart:
        for c in self.charts:
            if c.subgroup == H:
                return c
        raise KeyError(H)


def comparison_words(group: RAAG, max_len: int = 2) -> list:
    letters = [(v, s) for v in group.graph.vertices for s in (1, -1)]
    out = []
    for n in range(1, max_len + 1):
        for w in itertools.product(letters, repeat=n):
            if group.reduce(w) == tuple(w):
                out.append(tuple(w))
    return out


def _low_corner(X: ProductComplex, M, other):
    box = X.intersection_intervals(M, other)
    if box is None or any(hi == INF or lo == -INF for lo, hi in box):
        return None
    return tuple(lo for lo, _ in box)


def build_isometry(oracle_a: LengthOracle, oracle_b: LengthOracle, group: RAAG, family,
                   sample: int = 100, seed: int = 0, words=None, budget: int = 3):
    """Equivariant isometry between two models with equal length functions.

    Returns a :class:`MismatchReport` as soon as oracle data disagree; raises
    :class:`CoverageError` when a family member has no compact intersection
    to anchor its chart.
    """
    family = list(family)
    words = list(words) if words is not None else comparison_words(group)
    for H in family:
        for v in ((1, 0), (0, 1), (1, 1), (1, -1)):
            words.append(H.element(*v))
    for w in words:
        if not oracle_a.agrees(oracle_b, w):
            return MismatchReport(w, oracle_a(w), oracle_b(w))

    book_a, book_b = DistanceBook(oracle_a, group), DistanceBook(oracle_b, group)
    shapes = {}
    for i, j in itertools.permutations(range(len(family)), 2):
        A, B = family[i], family[j]
        ga = minset_gap(oracle_a, A, B, budget, exhaustive=min(budget, 2))
        gb = minset_gap(oracle_b, A, B, budget, exhaustive=min(budget, 2))
        if not (ga.best == gb.best):
            return MismatchReport((A, B), ga.best, gb.best, reason="distance")
        if not ga.intersecting:
            continue
        ra = reconstruct_rectangle(oracle_a, group, A, B, budget, book_a)
        rb = reconstruct_rectangle(oracle_b, group, A, B, budget, book_b)
        if not ra.same_shape(rb):
            return MismatchReport((A, B), ra, rb, reason="rectangle")
        shapes[(i, j)] = ra

    XA, XB = oracle_a.model, oracle_b.model
    if XA is None or XB is None:
        return IsometryChart([], {"words": len(words), "rectangles": len(shapes)}, True)

    charts = []
    for i, H in enumerate(family):
        chart = None
        for j, K in enumerate(family):
            if (i, j) not in shapes or shapes[(i, j)].kind not in ("point", "segment", "rectangle"):
                continue
            ca = _low_corner(XA, XA.minset(H), XA.minset(K))
            cb = _low_corner(XB, XB.minset(H), XB.minset(K))
            if ca is not None and cb is not None:
                chart = Chart(H, K, ca, cb)
                break
        if chart is None:
            raise CoverageError(H)
        charts.append(chart)

    rng = random.Random(seed)
    checks = {"distance": 0, "equivariance": 0, "gluing": 0, "failures": []}

    def coords():
        return tuple(Q2(Fraction(rng.randint(-40, 40), rng.choice((1, 2, 3, 4)))) for _ in range(2))

    def image(chart, c):
        return chart.point(XA, chart.anchor_a, c), chart.point(XB, chart.anchor_b, c)

    for _ in range(sample):
        c1, c2 = rng.choice(charts), rng.choice(charts)
        x1, y1 = image(c1, coords())
        x2, y2 = image(c2, coords())
        checks["distance"] += 1
        if not (XA.point_distance(x1, x2) == XB.point_distance(y1, y2)):
            checks["failures"].append(("distance", c1.subgroup, c2.subgroup))

        ch = rng.choice(charts)
        k, m = rng.randint(-3, 3), rng.randint(-3, 3)
        c = coords()
        x, y = image(ch, c)
        g = ch.subgroup.element(k, m)
        la, lb = XA.minset(ch.subgroup).lattice, XB.minset(ch.subgroup).lattice
        if la != lb:
            checks["failures"].append(("lattice", ch.subgroup))
        shifted = (c[0] + la[0] * k, c[1] + la[1] * m)
        gx, gy = image(ch, shifted)
        checks["equivariance"] += 1
        if XA.point_distance(XA.act(g, x), gx).sign() != 0 or XB.point_distance(XB.act(g, y), gy).sign() != 0:
            checks["failures"].append(("equivariance", ch.subgroup, (k, m)))

    # charts agree on overlaps
    for a, ca in enumerate(charts):
        for b, cb in enumerate(charts):
            if a >= b:
                continue
            MA_a, MA_b = XA.minset(ca.subgroup), XA.minset(cb.subgroup)
            box = XA.intersection_intervals(MA_a, MA_b)
            if box is None:
                continue
            for _ in range(3):
                pos = []
                for lo, hi in box:
                    lo_f = lo if lo != -INF else Q2(-5)
                    hi_f = hi if hi != INF else Q2(5)
                    t = Fraction(rng.randint(0, 8), 8)
                    pos.append(lo_f + (hi_f - lo_f) * t)
                ca_coords = tuple(p - an for p, an in zip(pos, ca.anchor_a))
                xa, ya = image(ca, ca_coords)
                cb_coords = tuple(
                    axis_coordinate(rose, ax, pt) - an
                    for rose, ax, pt, an in zip((XA.rose1, XA.rose2), MA_b.axes, xa, cb.anchor_a))
                _, yb = image(cb, cb_coords)
                checks["gluing"] += 1
                if XB.point_distance(ya, yb).sign() != 0:
                    checks["failures"].append(("gluing", ca.subgroup, cb.subgroup))
    ok = not checks["failures"]
    return IsometryChart(charts, checks, ok)
