"""Exact solving and classification of the Maker-Breaker total domination game."""

from .graph import Graph, GraphError
from .hypergraph import Hypergraph
from .solver import ClassLabel, Player, SearchOptions, outcome_class, solve

__all__ = [
    "ClassLabel",
    "Graph",
    "GraphError",
    "Hypergraph",
    "Player",
    "SearchOptions",
    "outcome_class",
    "solve",
]

__version__ = "0.1.0"
