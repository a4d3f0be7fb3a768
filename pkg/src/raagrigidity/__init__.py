"""Length-function rigidity for 2-dimensional right-angled Artin groups."""
from .exact import Q2, RootSum, format_length, parse_length
from .graph import DefiningGraph, Join, maximal_joins, star_vertex, validate
from .product import ProductComplex, RectangleReport
from .reconstruction import (
    LengthOracle,
    build_isometry,
    geometric_oracle,
    minset_gap,
    reconstruct_rectangle,
    star_reconstruct,
    table_oracle,
)
from .trees import MetricRose, axis_gap, tree_length
from .words import RAAG, BasicZ2, format_word, parse_word

__version__ = "0.1.0"

__all__ = [
    "Q2", "RootSum", "format_length", "parse_length",
    "DefiningGraph", "Join", "maximal_joins", "star_vertex", "validate",
    "ProductComplex", "RectangleReport",
    "LengthOracle", "build_isometry", "geometric_oracle", "minset_gap",
    "reconstruct_rectangle", "star_reconstruct", "table_oracle",
    "MetricRose", "axis_gap", "tree_length",
    "RAAG", "BasicZ2", "format_word", "parse_word",
]
