import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from raagrigidity.exact import Q2, RootSum
from raagrigidity.product import ProductComplex, classify_sides
from raagrigidity.trees import INF
from raagrigidity.words import BasicZ2, free_reduce, parse_word

from .oracles import TreeBall

LENGTHS = {"a": Fraction(1), "c": Fraction(2), "b": Fraction(1), "d": Fraction(3, 2)}
X = ProductComplex.from_lengths("ac", "bd", LENGTHS)
BALL1 = TreeBall({"a": 1, "c": 2}, 3)
BALL2 = TreeBall({"b": 1, "d": Fraction(3, 2)}, 3)

SIDE1 = st.lists(st.sampled_from([(x, s) for x in "ac" for s in (1, -1)]), min_size=0, max_size=3)
SIDE2 = st.lists(st.sampled_from([(x, s) for x in "bd" for s in (1, -1)]), min_size=0, max_size=3)


def Z(g1, g2, conj=""):
    return BasicZ2(X.join, parse_word(g1), parse_word(g2), parse_word(conj))


def brute_product_length(w1, w2):
    p1 = BALL1.displacement_profile(w1) if w1 else {(): 0}
    p2 = BALL2.displacement_profile(w2) if w2 else {(): 0}
    return min(math.hypot(x, y) for x in map(float, p1.values()) for y in map(float, p2.values()))


@settings(max_examples=40, deadline=None)
@given(w1=SIDE1, w2=SIDE2)
def test_length_is_least_product_displacement(w1, w2):
    w = tuple(w1) + tuple(w2)
    expected = brute_product_length(free_reduce(w1), free_reduce(w2))
    assert abs(float(X.length(w)) - expected) < 1e-12


@settings(max_examples=40, deadline=None)
@given(w1=SIDE1, w2=SIDE2)
def test_length_squared_is_sum_of_factor_squares(w1, w2):
    w = tuple(w2) + tuple(w1)
    l1, l2 = X.factor_lengths(w)
    assert X.length(w) == RootSum.sqrt(l1 * l1 + l2 * l2)
    assert X.length_squared(w) == l1 * l1 + l2 * l2


def test_isometric_action_on_points():
    o = X.origin()
    g = parse_word("a b d^-1")
    p = X.act(g, o)
    assert X.point_distance(o, p) == RootSum.sqrt(Q2(1) + Q2(Fraction(25, 4)))
    assert X.point_distance(p, X.act(g, p)) == X.point_distance(o, p)


def test_minset_distance_matches_factor_balls():
    M1, M2 = X.minset(Z("a", "b")), X.minset(Z("a", "b", "c d"))
    d, _ = X.minset_distance(M1, M2)
    cw1, cw2 = parse_word("c"), parse_word("d")
    d1 = BALL1.set_distance(BALL1.min_set(parse_word("a")), BALL1.min_set(cw1 + parse_word("a") + parse_word("c^-1")))
    d2 = BALL2.set_distance(BALL2.min_set(parse_word("b")), BALL2.min_set(cw2 + parse_word("b") + parse_word("d^-1")))
    assert d == RootSum.sqrt(Q2(d1) ** 2 + Q2(d2) ** 2)
    assert d == RootSum.sqrt(Q2(4) + Q2(Fraction(9, 4)))


def test_intersection_kinds():
    A = X.minset(Z("a", "b"))
    assert X.minset_intersection(A, A).kind == "plane"
    assert X.minset_intersection(A, X.minset(Z("a", "d"))).kind == "line"
    strip = X.minset_intersection(A, X.minset(Z("a", "b d")))
    assert strip.kind == "strip" and strip.side_lengths == (Q2(1), INF)
    assert X.minset_intersection(A, X.minset(Z("c", "d"))).kind == "point"
    assert X.minset_intersection(A, X.minset(Z("a c", "b d"))).kind == "rectangle"
    rect = X.minset_intersection(X.minset(Z("a c", "b d")), X.minset(Z("a c^-1", "b d^-1")))
    assert rect.kind == "rectangle" and rect.side_lengths == (Q2(1), Q2(1))
    assert all(s.direction == 1 for s in rect.sides)
    assert X.minset_intersection(A, X.minset(Z("a", "b", "c"))).kind == "empty"


def test_classify_sides_table():
    assert classify_sides(INF, INF) == "plane"
    assert classify_sides(INF, Q2(0)) == "line"
    assert classify_sides(Q2(1), INF) == "strip"
    assert classify_sides(Q2(1), Q2(0)) == "segment"
    assert classify_sides(Q2(0), Q2(0)) == "point"


def test_marking_permutes_generators():
    Y = ProductComplex(X.join, X.rose1, X.rose2, marking={"a": ("c", -1)})
    assert Y.length(parse_word("a")) == X.length(parse_word("c"))
    with pytest.raises(ValueError):
        ProductComplex(X.join, X.rose1, X.rose2, marking={"a": ("b", 1)})


def test_star_mode_shear():
    S = ProductComplex.from_lengths("v", "xy", {"v": 2, "x": 1, "y": 1}, star=True, skew={"x": Fraction(1, 2)})
    w = parse_word("x v y")
    assert S.shear(w) == Q2(Fraction(5, 2))
    assert S.length(w) == RootSum.sqrt(Q2(Fraction(25, 4)) + Q2(4))
    assert S.length(parse_word("x v^-1 x^-1")) == RootSum.const(2)
    with pytest.raises(ValueError):
        ProductComplex.from_lengths("ac", "bd", LENGTHS, skew={"b": 1})


def test_corner_cover_witness():
    S = ProductComplex.from_lengths("v", "xy", {"v": 1, "x": 1, "y": 1}, star=True)
    k, g, op, oh = S.corner_cover_witness(parse_word("x"), parse_word("y"))
    assert op > Q2(1) and oh > Q2(1) and k >= 2
    with pytest.raises(ValueError):
        S.corner_cover_witness(parse_word("x"), parse_word("x^2"))
