"""Exact, parameterized and randomized solvers for colored (hypergraph) clustering."""

from .core import (
    CCInstance,
    ColoredHypergraph,
    Decision,
    Edge,
    Solution,
    coloring_of,
    is_stable,
    oracle_max_stable,
    read_instance,
    stable_under,
    write_instance,
)

__all__ = [
    "CCInstance",
    "ColoredHypergraph",
    "Decision",
    "Edge",
    "Solution",
    "coloring_of",
    "is_stable",
    "oracle_max_stable",
    "read_instance",
    "stable_under",
    "write_instance",
]
