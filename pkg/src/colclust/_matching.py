"""Matching helpers shared by the vertex-cover engine and the bound computations."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping

import networkx as nx
from networkx.algorithms import bipartite


def greedy_matching_size(adj: Mapping[int, Iterable[int]]) -> int:
    used = set()
    size = 0
    for v in sorted(adj):
        if v in used:
            continue
        for w in adj[v]:
            if w not in used and w != v:
                used.add(v)
                used.add(w)
                size += 1
                break
    return size


def double_cover_matching(adj: Mapping[int, Iterable[int]]) -> int:
    """Maximum matching size of the bipartite double cover."""
    B = nx.Graph()
    left = []
    for v, nbrs in adj.items():
        for w in nbrs:
            B.add_edge((v, 0), (w, 1))
        if adj[v]:
            left.append((v, 0))
    if not left:
        return 0
    M = bipartite.hopcroft_karp_matching(B, top_nodes=left)
    return len(M) // 2


def lp_vertex_cover(adj: Mapping[int, Iterable[int]]) -> Fraction:
    """Optimum of the vertex cover LP relaxation, exact by half-integrality."""
    return Fraction(double_cover_matching(adj), 2)


def max_matching_pairs(pairs: Iterable[tuple[int, int, int]]) -> list[int]:
    """Maximum cardinality matching; ``pairs`` holds ``(u, v, label)``, labels of chosen pairs returned."""
    G = nx.Graph()
    for u, v, label in pairs:
        if not G.has_edge(u, v):
            G.add_edge(u, v, label=label)
    M = nx.max_weight_matching(G, maxcardinality=True)
    return sorted(G.edges[u, v]["label"] for u, v in M)
