"""Coalescing random walk and voter model simulation on rooted graphs."""
from . import arrows, crw, graph, voter
from .graph import GraphFamily, GraphSpec, OffspringDistribution, RootedGraph, build

__all__ = [
    "arrows",
    "crw",
    "graph",
    "voter",
    "GraphFamily",
    "GraphSpec",
    "OffspringDistribution",
    "RootedGraph",
    "build",
]
__version__ = "0.1.0"
