"""Experiment configuration files.

A config is an INI file::

    [graph]
    vertices = a b c d
    edges = a-c a-d b-c b-d

    [lengths]
    default = 1
    c = sqrt2

    [product]
    side1 = a b
    side2 = c d
    mode = product

    [marking]
    a = b^-1

    [subgroups]
    G = a, c
    H = a b, c d @ b

    [words]
    list = a; a c; a b a^-1

    [budgets]
    N = 50
    S = 100
    seed = 0
    epsilon = 1/100

``mode = star`` makes ``side1`` the central vertex of ``E^1 x T``; a
``[skew]`` section then gives the line translation of each free generator.
``[marking]`` relabels generators (here ``a`` acts as ``b^-1``).  Subgroups
are ``gen1, gen2`` with an optional ``@ conjugator``.

Lengths are exact: integers, ``p/q``, decimals, or ``q2`` expressions such
as ``1+1/2*sqrt2``.
"""
from __future__ import annotations

import configparser
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .exact import Q2, parse_q2
from .graph import DefiningGraph, GraphError, Join, maximal_joins
from .product import ProductComplex
from .trees import MetricRose
from .words import BasicZ2, parse_word


class ConfigError(ValueError):
    """A config that parses but does not describe a valid experiment."""


@dataclass
class ExperimentConfig:
    graph: DefiningGraph
    lengths: dict
    side1: tuple | None = None
    side2: tuple | None = None
    mode: str = "product"
    skew: dict = field(default_factory=dict)
    marking: dict = field(default_factory=dict)
    subgroups: dict = field(default_factory=dict)  # name -> (gen1, gen2, conjugator) words
    words: list = field(default_factory=list)
    budget: int = 50
    sample: int = 100
    seed: int = 0
    epsilon: Fraction = Fraction(1, 100)
    development: dict = field(default_factory=dict)
    source: str = ""

    # ------------------------------------------------------------------
    def join(self) -> Join:
        if self.side1 is not None:
            return Join(self.side1, self.side2)
        joins = maximal_joins(self.graph)
        if len(joins) == 1 and joins[0].vertices() == frozenset(self.graph.vertices):
            return joins[0]
        raise ConfigError("lengths need a [product] section or a graph that is a single join")

    def model(self) -> ProductComplex:
        join = self.join()
        r1 = MetricRose({v: self.lengths[v] for v in join.side1})
        r2 = MetricRose({v: self.lengths[v] for v in join.side2})
        return ProductComplex(join, r1, r2, star=self.mode == "star",
                              skew=self.skew or None, marking=self.marking or None)

    def subgroup(self, spec) -> BasicZ2:
        """A :class:`BasicZ2` from a name in ``[subgroups]`` or a ``"gen1, gen2 [@ conj]"`` string."""
        if isinstance(spec, str) and spec in self.subgroups:
            g1, g2, c = self.subgroups[spec]
        else:
            g1, g2, c = parse_subgroup(spec)
        join = self.join()
        side2 = set(join.side2)
        if g1 and all(x in side2 for x, _ in g1):
            g1, g2 = g2, g1
        for w, side in ((g1, set(join.side1)), (g2, side2)):
            if not w or any(x not in side for x, _ in w):
                raise ConfigError(f"{spec!r}: generators must lie one in each side of {join}")
        return BasicZ2(join, g1, g2, c)


def parse_subgroup(text: str) -> tuple:
    conj = ()
    if "@" in text:
        text, c = text.split("@", 1)
        conj = parse_word(c)
    parts = [p for p in text.split(",")]
    if len(parts) != 2:
        raise ConfigError(f"subgroup {text!r} needs two generators separated by a comma")
    return parse_word(parts[0]), parse_word(parts[1]), conj


def _labels(text: str) -> tuple:
    return tuple(text.replace(",", " ").split())


def _edges(text: str) -> list:
    out = []
    for tok in text.replace(",", " ").split():
        if "-" not in tok:
            raise ConfigError(f"edge {tok!r} must look like u-v")
        u, v = tok.split("-", 1)
        out.append((u, v))
    return out


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except ValueError as exc:
        raise ConfigError(f"not a rational: {text!r}") from exc


def loads(text: str, source: str = "<string>") -> ExperimentConfig:
    cp = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    cp.optionxform = str  # vertex labels are case sensitive
    try:
        cp.read_string(text, source=source)
    except configparser.Error as exc:
        raise ConfigError(str(exc).splitlines()[0]) from exc
    if not cp.has_section("graph"):
        raise ConfigError("missing [graph] section")
    g = cp["graph"]
    try:
        graph = DefiningGraph(_labels(g.get("vertices", "")), _edges(g.get("edges", "")))
    except GraphError as exc:
        raise ConfigError(str(exc)) from exc

    lengths = {}
    if cp.has_section("lengths"):
        sec = cp["lengths"]
        default = sec.get("default")
        for v in graph.vertices:
            raw = sec.get(v, default)
            if raw is not None:
                lengths[v] = parse_q2(raw)
        unknown = set(sec) - set(graph.vertices) - {"default"}
        if unknown:
            raise ConfigError(f"[lengths] names unknown vertices: {sorted(unknown)}")
    else:
        lengths = {v: Q2(1) for v in graph.vertices}

    cfg = ExperimentConfig(graph, lengths, source=source)
    if cp.has_section("product"):
        p = cp["product"]
        cfg.side1 = _labels(p.get("side1", ""))
        cfg.side2 = _labels(p.get("side2", ""))
        cfg.mode = p.get("mode", "product").strip()
        if cfg.mode not in ("product", "star"):
            raise ConfigError(f"unknown mode {cfg.mode!r}")
        for v in cfg.side1 + cfg.side2:
            if v not in graph.vertices:
                raise ConfigError(f"[product] names unknown vertex {v!r}")
    if cp.has_section("skew"):
        cfg.skew = {k: parse_q2(v) for k, v in cp["skew"].items()}
    if cp.has_section("marking"):
        for src, dst in cp["marking"].items():
            w = parse_word(dst)
            if len(w) != 1:
                raise ConfigError(f"marking of {src} must be a single generator or inverse")
            cfg.marking[src] = w[0]
    if cp.has_section("subgroups"):
        for name, spec in cp["subgroups"].items():
            cfg.subgroups[name] = parse_subgroup(spec)
    if cp.has_section("words"):
        raw = cp["words"].get("list", "")
        cfg.words = [parse_word(w) for w in raw.split(";") if w.strip()]
    if cp.has_section("budgets"):
        b = cp["budgets"]
        cfg.budget = b.getint("N", cfg.budget)
        cfg.sample = b.getint("S", cfg.sample)
        cfg.seed = b.getint("seed", cfg.seed)
        if "epsilon" in b:
            cfg.epsilon = _fraction(b["epsilon"])
        if cfg.budget < 1 or cfg.sample < 1:
            raise ConfigError("budgets must be positive")
    if cp.has_section("development"):
        cfg.development = dict(cp["development"])
    missing = [v for v in graph.vertices if v not in lengths]
    if missing and cfg.side1 is not None:
        raise ConfigError(f"no length for {missing}")
    return cfg


def load(path) -> ExperimentConfig:
    """Read a config file; ``OSError`` propagates for missing files."""
    path = Path(path)
    return loads(path.read_text(), source=str(path))
