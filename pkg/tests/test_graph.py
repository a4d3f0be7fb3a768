import itertools
import random

import networkx as nx
import pytest

from raagrigidity.graph import DefiningGraph, GraphError, Join, maximal_joins, star_vertex, validate


def brute_maximal_joins(graph):
    """Maximal complete bipartite pairs found by scanning all disjoint subset pairs."""
    verts = graph.vertices
    found = set()
    for r in range(1, len(verts) + 1):
        for A in itertools.combinations(verts, r):
            rest = [v for v in verts if v not in A]
            for s in range(1, len(rest) + 1):
                for B in itertools.combinations(rest, s):
                    if graph.subgraph_is_join(A, B):
                        found.add(frozenset([frozenset(A), frozenset(B)]))

    def inside(p, q):
        a, b = tuple(p)
        c, d = tuple(q)
        return (a <= c and b <= d) or (a <= d and b <= c)

    return {p for p in found if not any(p != q and inside(p, q) for q in found)}


def random_triangle_free(n, p, rng):
    g = nx.gnp_random_graph(n, p, seed=rng.randrange(10**9))
    for u, v in list(g.edges):
        if g.has_edge(u, v) and set(g[u]) & set(g[v]):
            g.remove_edge(u, v)
    return DefiningGraph([str(v) for v in g.nodes], [(str(u), str(v)) for u, v in g.edges])


def test_bad_descriptions_raise():
    with pytest.raises(GraphError):
        DefiningGraph("aa", [])
    with pytest.raises(GraphError):
        DefiningGraph("ab", [("a", "z")])


def test_validation_lists_every_violation():
    g = DefiningGraph("abcd", [("a", "b"), ("b", "c"), ("a", "c"), ("a", "a"), ("b", "a")])
    kinds = sorted(v.kind for v in validate(g).violations)
    assert kinds == ["isolated", "loop", "multi-edge", "triangle"]
    assert "3-cycle: {a,b,c}" in str(validate(g))
    assert validate(DefiningGraph.cycle("abcde")).ok


def test_square_is_one_join():
    joins = maximal_joins(DefiningGraph.cycle("abcd"))
    assert joins == [Join(("a", "c"), ("b", "d"))]


def test_pentagon_has_five_star_joins():
    joins = maximal_joins(DefiningGraph.cycle("abcde"))
    assert len(joins) == 5
    assert all(len(j.side1) + len(j.side2) == 3 for j in joins)


def test_star_vertex():
    assert star_vertex(DefiningGraph.complete_bipartite("a", "xyz")) == "a"
    assert star_vertex(DefiningGraph.cycle("abcd")) is None


@pytest.mark.parametrize("seed", range(25))
def test_maximal_joins_match_brute_force(seed):
    rng = random.Random(seed)
    g = random_triangle_free(rng.randint(3, 7), rng.choice([0.3, 0.5, 0.7]), rng)
    mine = {frozenset([frozenset(j.side1), frozenset(j.side2)]) for j in maximal_joins(g)}
    assert mine == brute_maximal_joins(g)
