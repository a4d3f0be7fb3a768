"""Acceptance criteria, one test each; verdict lines are collected in conftest."""
import itertools
import math
import random
import time
from fractions import Fraction
from pathlib import Path

import mpmath
import networkx as nx
import numpy as np
import pytest
from networkx.algorithms.isomorphism import GraphMatcher

from raagrigidity.config import load
from raagrigidity.development import (
    THETA1_EDGES,
    THETA2_EDGES,
    DevelopmentError,
    bend_fixture,
    classify_link,
    develop,
    length_bound_check,
    link_configurations,
    staircase,
    straighten,
    theta,
)
from raagrigidity.exact import Q2, RootSum
from raagrigidity.graph import DefiningGraph
from raagrigidity.product import ProductComplex
from raagrigidity.reconstruction import (
    MismatchReport,
    build_isometry,
    geometric_oracle,
    minset_gap,
    reconstruct_rectangle,
    star_reconstruct,
)
from raagrigidity.trees import MetricRose, axis_gap, tree_length
from raagrigidity.words import RAAG, BasicZ2, free_reduce, inverse, parse_word, power

from .conftest import criterion
from .oracles import brute_force_straighten, tree_gap_bfs, word_classes

pytestmark = pytest.mark.acceptance

CONFIGS = Path(__file__).resolve().parent.parent / "configs"


def random_free_word(rng, labels, max_len, min_len=1):
    while True:
        n = rng.randint(min_len, max_len)
        w = free_reduce(tuple((rng.choice(labels), rng.choice((1, -1))) for _ in range(n)))
        if w:
            return w


# ---------------------------------------------------------------------------


def test_criterion_01_tree_gap_formula():
    with criterion(1, "tree gap equals half the length defect on disjoint axes") as out:
        rng = random.Random(1)
        start = time.perf_counter()
        disjoint = 0
        for _ in range(200):
            labels = "xyz"[: rng.choice((2, 3))]
            lengths = {x: Fraction(rng.randint(1, 6), rng.randint(1, 3)) for x in labels}
            R = MetricRose(lengths)
            g = random_free_word(rng, labels, 6)
            if rng.random() < 0.5:
                h = random_free_word(rng, labels, 6)
            else:
                c = random_free_word(rng, labels, 2)
                h = free_reduce(c + random_free_word(rng, labels, 2) + inverse(c))
            gap = axis_gap(R, g, h)
            lg, lh = tree_length(R, g), tree_length(R, h)
            if gap.disjoint:
                disjoint += 1
                defect = tree_length(R, g + h) - lg - lh
                assert gap.distance * 2 == defect, (g, h)
            bg, bh, bgap = tree_gap_bfs(lengths, g, h)
            assert abs(float(lg) - bg) < 1e-9 and abs(float(lh) - bh) < 1e-9
            assert abs(float(gap.distance) - bgap) < 1e-9, (g, h)
        elapsed = time.perf_counter() - start
        out["detail"] = f"{disjoint}/200 disjoint pairs, all exact; ball oracle agrees"
        assert disjoint >= 60
        assert elapsed < 10


def test_criterion_06_star_reconstruction():
    with criterion(6, "star reconstruction of shear and tree length") as out:
        X = ProductComplex.from_lengths("v", "cd", {"v": 2, "c": 1, "d": Q2(0, 1)}, star=True,
                                        skew={"c": 2, "d": 0})
        oracle = geometric_oracle(X)
        letters = [(x, s) for x in "cd" for s in (1, -1)]
        words = []
        for n in range(1, 7):
            for w in itertools.product(letters, repeat=n):
                if free_reduce(w) == w:
                    words.append(w)
        extra = [parse_word(f"v^{k}") for k in range(1, 7)] + [parse_word("c v^-1"), parse_word("d")]
        rows = star_reconstruct(oracle, "v", words + extra)
        for row in rows:
            assert row.shear == RootSum.const(X.shear(row.word)), row.word
            assert row.tree_length == RootSum.const(X.factor_lengths(row.word)[1]), row.word
        powers = {row.word: row.shear for row in rows[len(words):len(words) + 6]}
        for k in range(1, 7):
            assert powers[parse_word(f"v^{k}")] == RootSum.const(2 * k)
        orth = [row for row in rows if row.shear.is_zero() and not row.tree_length.is_zero()]
        assert orth
        out["detail"] = f"{len(rows)} words exact, {len(orth)} with zero shear"


def test_criterion_10_word_algebra():
    with criterion(10, "normal forms and cyclic cores against orbit enumeration") as out:
        graphs = [g for g in nx.graph_atlas_g() if 1 <= g.number_of_nodes() <= 4]
        total = 0
        for nxg in graphs:
            labels = "abcd"[: nxg.number_of_nodes()]
            graph = DefiningGraph(labels, [(labels[u], labels[v]) for u, v in nxg.edges])
            G = RAAG(graph)
            commute = graph.adjacent
            alphabet = [(x, s) for x in labels for s in (1, -1)]
            words = [w for n in range(6) for w in itertools.product(alphabet, repeat=n)]
            total += len(words)
            for cls in word_classes(words, commute):
                shortest = min(len(w) for w in cls)
                canon = min((w for w in cls if len(w) == shortest), key=G.word_key)
                for w in cls:
                    assert G.normal_form(w) == canon, (graph, w)
            for cls in word_classes(words, commute, rotations=True):
                shortest = min(len(w) for w in cls)
                cores = {G.cyclic_reduce(w).core for w in cls}
                assert len(cores) == 1 and len(next(iter(cores))) == shortest, (graph, cls[0])
        out["detail"] = f"{len(graphs)} graphs, {total} words"


# ---------------------------------------------------------------------------
# random basic subgroups in a product of two rank-2 trees

SIDE1, SIDE2 = ("a", "b"), ("c", "d")
PRIMITIVE1 = [parse_word(w) for w in ("a", "b", "a b", "a b^-1", "a^-1 b", "a^2 b")]
PRIMITIVE2 = [parse_word(w) for w in ("c", "d", "c d", "c d^-1", "c^-1 d", "c d^2")]


def random_model(rng, irrational=False):
    lengths = {x: rng.randint(1, 3) for x in SIDE1 + SIDE2}
    if irrational:
        lengths[rng.choice(SIDE1 + SIDE2)] = Q2(rng.randint(0, 1), 1)
    return ProductComplex.from_lengths(SIDE1, SIDE2, lengths)


def random_subgroup(rng, X, conj_len=3):
    conj = random_free_word(rng, SIDE1 + SIDE2, conj_len, min_len=0) if conj_len else ()
    return BasicZ2(X.join, rng.choice(PRIMITIVE1), rng.choice(PRIMITIVE2), X.group.normal_form(conj))


def _z2(x):
    x = Q2.coerce(x)
    assert x.a.denominator == 1 and x.b.denominator == 1
    return int(x.a), int(x.b)


def _sign(p, q):
    """Exact sign of ``p + q sqrt2`` on integer arrays."""
    sp, sq = np.sign(p), np.sign(q)
    cross = np.sign(p * p - 2 * q * q)
    return np.where(sq == 0, sp, np.where(sp == 0, sq, np.where(sp == sq, sp, sp * cross)))


def _mul(x, y):
    return x[0] * y[0] + 2 * x[1] * y[1], x[0] * y[1] + x[1] * y[0]


def factor_table(X, G, H, side, N):
    """``table[i, k]`` = factor length of ``g_side^i (conjugated) * h_side^k (conjugated)``."""
    rose = X.rose1 if side == 1 else X.rose2
    gg = G.gen1 if side == 1 else G.gen2
    hh = H.gen1 if side == 1 else H.gen2
    cg, ch = X.project(G.conjugator, side), X.project(H.conjugator, side)
    size = 2 * N + 1
    p = np.zeros((size, size), dtype=object)
    q = np.zeros((size, size), dtype=object)
    for i in range(-N, N + 1):
        gi = cg + X.project(power(gg, i), side) + inverse(cg)
        for k in range(-N, N + 1):
            hk = ch + X.project(power(hh, k), side) + inverse(ch)
            p[i + N, k + N], q[i + N, k + N] = _z2(tree_length(rose, gi + hk))
    return p, q


def triangle_violations(X, G, H, N):
    """Count lattice pairs with ``l(gh) > l(g) + l(h)``, exactly, over ``|i|,|j|,|k|,|m| <= N``."""
    T1, T2 = factor_table(X, G, H, 1, N), factor_table(X, G, H, 2, N)
    sq1, sq2 = _mul(T1, T1), _mul(T2, T2)
    # axes ordered (i, j, k, m)
    A = tuple(s1[:, None, :, None] + s2[None, :, None, :] for s1, s2 in zip(sq1, sq2))
    B = tuple(s1[:, N][:, None, None, None] + s2[:, N][None, :, None, None] for s1, s2 in zip(sq1, sq2))
    C = tuple(s1[N, :][None, None, :, None] + s2[N, :][None, None, None, :] for s1, s2 in zip(sq1, sq2))
    D = tuple(a - b - c for a, b, c in zip(A, B, C))
    BC4 = tuple(4 * x for x in _mul(B, C))
    D2 = _mul(D, D)
    ok = (_sign(*D) <= 0) | (_sign(BC4[0] - D2[0], BC4[1] - D2[1]) >= 0)
    # spot check the tables against the model's own length function
    rng = random.Random(0)
    for _ in range(5):
        i, j, k, m = (rng.randint(-N, N) for _ in range(4))
        g, h = G.element(i, j), H.element(k, m)
        val = RootSum.sqrt(Q2(int(A[0][i + N, j + N, k + N, m + N]), int(A[1][i + N, j + N, k + N, m + N])))
        assert val == X.length(g + h)
    return int((~ok).sum()), ok.size


def test_criterion_02_intersecting_triangle_inequality():
    with criterion(2, "l(gh) <= l(g) + l(h) when minsets meet") as out:
        rng = random.Random(2)
        fixtures, pairs = 0, 0
        while fixtures < 100:
            X = random_model(rng, irrational=fixtures % 5 == 0)
            G, H = random_subgroup(rng, X), random_subgroup(rng, X)
            if X.minset_intersection(X.minset(G), X.minset(H)).kind == "empty":
                continue
            bad, n = triangle_violations(X, G, H, 10)
            assert bad == 0, (G, H)
            fixtures += 1
            pairs += n
        out["detail"] = f"100 fixtures, {pairs} lattice pairs, 0 violations"


def test_criterion_03_commensurable_gap_attained():
    with criterion(3, "gap search attains 2d for commensurable lengths") as out:
        rng = random.Random(3)
        start = time.perf_counter()
        fixtures, worst = 0, 0
        while fixtures < 50:
            X = random_model(rng)
            G, H = random_subgroup(rng, X, 2), random_subgroup(rng, X, 2)
            d, _ = X.minset_distance(X.minset(G), X.minset(H))
            if d.sign() <= 0:
                continue
            est = minset_gap(geometric_oracle(X), G, H, 20, target=d * 2)
            assert est.attained and est.best == d * 2, (G, H, est.best, d)
            fixtures += 1
            worst = max(worst, est.history[-1][0])
        elapsed = time.perf_counter() - start
        out["detail"] = f"50 fixtures attained, largest N = {worst}, {elapsed:.1f}s"
        assert elapsed < 60


def test_criterion_04_irrational_gap_never_attained():
    with criterion(4, "irrational slope: gap approaches 2d without attaining it") as out:
        cfg = load(CONFIGS / "sqrt2.ini")
        X = cfg.model()
        G, H = cfg.subgroup("G"), cfg.subgroup("H")
        d, _ = X.minset_distance(X.minset(G), X.minset(H))
        target = d * 2
        est = minset_gap(geometric_oracle(X), G, H, 50, target=target)
        assert not est.attained and len(est.history) == 50
        errs = [target - b for _, b in est.history]
        assert all(e.sign() > 0 for e in errs)
        changes = [(n, e) for (n, e), prev in zip(zip(range(1, 51), errs), [None] + errs[:-1])
                   if prev is None or not e == prev]
        assert all(b < a for (_, a), (_, b) in zip(changes, changes[1:]))
        assert all(not b > a for a, b in zip(errs, errs[1:]))
        assert len(changes) >= 3
        final = float(errs[-1])
        assert final < 1e-3
        out["detail"] = (f"2d - best at N=50 is {final:.3e}; strictly decreased at N = "
                         f"{[n for n, _ in changes]}")


def test_criterion_05_rectangle_round_trip():
    with criterion(5, "reconstructed intersections match the model") as out:
        rng = random.Random(5)
        quota = {"point": 25, "segment": 25, "rectangle": 25, "strip": 25}
        seen = dict.fromkeys(quota, 0)
        cases = []
        square = load(CONFIGS / "square.ini")
        cases.append((square.model(), square.subgroup("G"), square.subgroup("H")))
        while sum(seen.values()) < 100:
            X = random_model(rng, irrational=rng.random() < 0.3)
            G, H = random_subgroup(rng, X, 2), random_subgroup(rng, X, 2)
            kind = X.minset_intersection(X.minset(G), X.minset(H)).kind
            if kind in quota and seen[kind] < quota[kind]:
                seen[kind] += 1
                cases.append((X, G, H))
        squares = 0
        for X, G, H in cases:
            truth = X.minset_intersection(X.minset(G), X.minset(H))
            got = reconstruct_rectangle(geometric_oracle(X), X.group, G, H)
            assert got.same_shape(truth), (G, H, got, truth)
            if truth.kind == "rectangle" and truth.sides[0].length == truth.sides[1].length:
                squares += 1
        assert squares >= 1
        out["detail"] = f"{len(cases)} fixtures {seen}, {squares} squares, 0 mismatches"


def test_criterion_07_rigidity_at_desk_scale():
    with criterion(7, "equal length functions give an isometry, perturbations a witness") as out:
        cfg = load(CONFIGS / "mixed_a.ini")
        XA, XB = cfg.model(), load(CONFIGS / "mixed_b.ini").model()
        family = [cfg.subgroup(n) for n in cfg.subgroups]
        res = build_isometry(geometric_oracle(XA), geometric_oracle(XB), XA.group, family, sample=100)
        assert not isinstance(res, MismatchReport) and res.ok
        witnesses = {}
        for label in SIDE1 + SIDE2:
            rose = XA.rose1 if label in SIDE1 else XA.rose2
            XP = XA.with_length(label, rose.length[label] + Fraction(1, 100))
            rep = build_isometry(geometric_oracle(XA), geometric_oracle(XP), XA.group, family, sample=10)
            assert isinstance(rep, MismatchReport) and rep.reason == "length"
            assert 1 <= len(rep.witness) <= 2
            witnesses[label] = len(rep.witness)
        checks = {k: v for k, v in res.checks.items() if k != "failures"}
        out["detail"] = f"isometry checks {checks}; perturbation witness lengths {witnesses}"


def random_development(rng):
    n = rng.randint(3, 7)
    lengths = [Fraction(rng.randint(1, 9), rng.randint(1, 3)) for _ in range(n)]
    turns = [Fraction(rng.randint(-120, 120), 100) for _ in range(n - 1)]
    turns.append(-sum(turns))
    if abs(turns[-1]) >= math.pi - 0.1:
        return None
    slits = {i: rng.choice([1, -1]) for i in rng.sample(range(n), rng.randint(1, n))}
    return develop(lengths, turns, slits)


def test_criterion_08_plane_development():
    with criterion(8, "staircase exact, bends within 8 eps, straightening matches optimizer") as out:
        dev = staircase(3, 2, 1)
        st = straighten(dev)
        assert st.translation_length == RootSum.const(3 + 2 + 2 * 1)
        residuals = {}
        for eps in (Fraction(1, 10), Fraction(1, 100), Fraction(1, 1000)):
            dev = bend_fixture(eps)
            chk = length_bound_check(dev, straighten(dev), eps)
            r = float(chk.residual)
            assert chk.ok and 0 <= r <= 8 * float(eps)
            residuals[str(eps)] = f"{r:.2e}"
        rng = random.Random(8)
        worst, compared, severed = 0.0, 0, 0
        while compared < 40:
            dev = random_development(rng)
            if dev is None:
                continue
            try:
                st = straighten(dev)
            except DevelopmentError:
                severed += 1
                continue
            e1, e2 = dev.frame()
            verts = dev.vertices(0, 1)[:-1]
            X = [float(x * e1[0] + y * e1[1]) for x, y in verts]
            Y = [float(x * e2[0] + y * e2[1]) for x, y in verts]
            T = float(mpmath.hypot(*dev.period_mp()))
            ref = brute_force_straighten(X, Y, dev.slits, T)
            worst = max(worst, abs(float(st.translation_length) - ref))
            compared += 1
        assert worst < 1e-9
        out["detail"] = (f"staircase 7 = 7; residuals {residuals}; optimizer gap {worst:.1e} over 40 "
                         f"({severed} severed strips skipped)")


def _independent_kind(cfg):
    verts, edges = theta(cfg)
    span = nx.Graph()
    span.add_nodes_from(verts)
    span.add_edges_from(tuple(e) for e in edges)
    t1, t2 = nx.Graph(), nx.Graph()
    t1.add_edges_from(tuple(e) for e in THETA1_EDGES)
    t2.add_edges_from(tuple(e) for e in THETA2_EDGES)
    if nx.is_isomorphic(span, t1):
        return "type1"
    if GraphMatcher(t2, span).subgraph_is_monomorphic():
        return "type2"
    return None


def _triangle_free(g):
    return not any(nx.triangles(g).values())


def test_criterion_09_link_classification():
    with criterion(9, "every link configuration is type 1 or inside Theta_2") as out:
        graphs = [g for g in nx.graph_atlas_g() if g.number_of_nodes() <= 7 and _triangle_free(g)]
        graphs += [nx.cubical_graph(), nx.complete_bipartite_graph(4, 4), nx.complete_bipartite_graph(5, 6),
                   nx.grid_2d_graph(3, 4), nx.circular_ladder_graph(6)]
        rng = random.Random(9)
        for _ in range(60):
            g = nx.gnp_random_graph(rng.randint(8, 12), rng.choice([0.25, 0.35, 0.5]),
                                    seed=rng.randrange(10**9))
            for u, v in list(g.edges):
                if set(g[u]) & set(g[v]):
                    g.remove_edge(u, v)
            graphs.append(g)
        counts = {"type1": 0, "type2": 0}
        configs = 0
        for g in graphs:
            assert g.number_of_nodes() <= 12
            for cfg in link_configurations(g):
                if cfg.distance_to_circle() < 1:
                    continue
                lt = classify_link(cfg)
                assert lt.check(), cfg
                assert _independent_kind(cfg) == lt.kind, cfg
                counts[lt.kind] += 1
                configs += 1
        assert counts["type1"] > 0 and counts["type2"] > 0
        out["detail"] = f"{len(graphs)} graphs, {configs} configurations {counts}, 0 unclassifiable"
