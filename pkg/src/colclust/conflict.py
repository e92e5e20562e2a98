"""Conflict graphs and the exact engines built on them.

A stable edge set is exactly an independent set of the conflict graph, so the
minimum number of unstable edges is its vertex cover number.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable

from networkx.algorithms import bipartite
import networkx as nx

from ._matching import greedy_matching_size, lp_vertex_cover
from .core import CCInstance, ColoredHypergraph, Decision, PreconditionError, Solution


@dataclass(frozen=True)
class ConflictGraph:
    m: int
    adj: tuple[frozenset[int], ...]

    def edges(self) -> list[tuple[int, int]]:
        return [(i, j) for i in range(self.m) for j in self.adj[i] if i < j]

    @property
    def num_edges(self) -> int:
        return sum(len(a) for a in self.adj) // 2

    def is_independent(self, F: Iterable[int]) -> bool:
        F = set(F)
        return all(not (self.adj[i] & F) for i in F)

    def as_dict(self) -> dict[int, set[int]]:
        return {i: set(a) for i, a in enumerate(self.adj)}


def build_conflict(g: ColoredHypergraph) -> ConflictGraph:
    adj: list[set[int]] = [set() for _ in range(g.m)]
    for v in range(g.n):
        inc = g.incidence[v]
        for a, b in combinations(inc, 2):
            if g.edges[a].color != g.edges[b].color:
                adj[a].add(b)
                adj[b].add(a)
    return ConflictGraph(g.m, tuple(frozenset(a) for a in adj))


# ------------------------------------------------------ branch-and-reduce MIS


class _MIS:
    """Maximum independent set by branch and reduce.

    Reductions: degree 0 and 1 vertices join the solution, degree 2 vertices
    are folded (or taken directly when their neighbors are adjacent).
    Branching picks the lowest-id vertex of maximum degree. A branch is cut
    when the cover already paid plus a lower bound (greedy matching, LP
    relaxation) cannot beat the incumbent.
    """

    def __init__(self, next_id: int):
        self.next_id = next_id
        self.nodes = 0

    def solve(self, adj: dict[int, set[int]], budget: float) -> set[int] | None:
        """A maximum independent set whose complement is smaller than ``budget``, else None."""
        self.nodes += 1
        adj = {v: set(nb) for v, nb in adj.items()}
        taken: list[int] = []
        folds: list[tuple[int, int, int, int]] = []
        paid = 0

        def remove(v):
            for w in adj.pop(v):
                adj[w].discard(v)

        changed = True
        while changed:
            changed = False
            for v in sorted(adj):
                if v not in adj:
                    continue
                d = len(adj[v])
                if d == 0:
                    taken.append(v)
                    del adj[v]
                    changed = True
                elif d == 1:
                    (u,) = adj[v]
                    taken.append(v)
                    remove(u)
                    remove(v)
                    paid += 1
                    changed = True
                elif d == 2:
                    u, w = sorted(adj[v])
                    if w in adj[u]:
                        taken.append(v)
                        remove(u)
                        remove(w)
                        remove(v)
                        paid += 2
                    else:
                        z = self.next_id
                        self.next_id += 1
                        nz = (adj[u] | adj[w]) - {v}
                        remove(u)
                        remove(w)
                        remove(v)
                        adj[z] = set(nz)
                        for x in nz:
                            adj[x].add(z)
                        folds.append((z, v, u, w))
                        paid += 1
                    changed = True
            if paid >= budget:
                return None

        def unfold(core: set[int]) -> set[int]:
            out = set(core) | set(taken)
            for z, v, u, w in reversed(folds):
                if z in out:
                    out.discard(z)
                    out.update((u, w))
                else:
                    out.add(v)
            return out

        if not adj:
            return unfold(set())
        remaining = budget - paid
        if greedy_matching_size(adj) >= remaining:
            return None
        if math.ceil(lp_vertex_cover(adj)) >= remaining:
            return None

        comps = _components(adj)
        if len(comps) > 1:
            bounds = [max(greedy_matching_size(c), math.ceil(lp_vertex_cover(c))) for c in comps]
            total_lb = sum(bounds)
            core: set[int] = set()
            used = 0
            for comp, lb in zip(comps, bounds):
                # each component must fit in what the others leave over
                sub = self.solve(comp, remaining - used - (total_lb - lb))
                if sub is None:
                    return None
                used += len(comp) - len(sub)
                total_lb -= lb
                core |= sub
            return unfold(core)

        v = min(adj, key=lambda x: (-len(adj[x]), x))
        best: set[int] | None = None
        # v in the independent set: its neighbors are covered
        nv = adj[v]
        inside = {x: adj[x] - nv - {v} for x in adj if x != v and x not in nv}
        sub = self.solve(inside, remaining - len(nv))
        if sub is not None:
            best = sub | {v}
            remaining = len(adj) - len(best)
        # v in the cover
        rest = {x: adj[x] - {v} for x in adj if x != v}
        sub = self.solve(rest, remaining - 1)
        if sub is not None:
            best = sub
        if best is None:
            return None
        return unfold(best)


def _components(adj: dict[int, set[int]]) -> list[dict[int, set[int]]]:
    seen: set[int] = set()
    out = []
    for s in sorted(adj):
        if s in seen:
            continue
        stack = [s]
        seen.add(s)
        comp = []
        while stack:
            x = stack.pop()
            comp.append(x)
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        out.append({x: adj[x] for x in comp})
    return out


def max_independent_set(adj: dict[int, set[int]]) -> tuple[set[int], int]:
    """Maximum independent set of a plain graph; returns the set and the search-node count."""
    engine = _MIS(next_id=max(adj, default=-1) + 1)
    result = engine.solve(adj, len(adj) + 1)
    assert result is not None
    return result, engine.nodes


def solve_via_vc(inst: CCInstance | ColoredHypergraph) -> Solution:
    g = inst.graph if isinstance(inst, CCInstance) else inst
    cg = build_conflict(g)
    mis, nodes = max_independent_set(cg.as_dict())
    return Solution(len(mis), frozenset(mis), {"search_nodes": nodes, "vc": g.m - len(mis)})


# ------------------------------------------------------ the 2^r branching


def _first_conflict(cg: ConflictGraph, alive: set[int]) -> tuple[int, int] | None:
    for i in sorted(alive):
        for j in sorted(cg.adj[i]):
            if j in alive:
                return i, j
    return None


def branch_unstable_decide(inst: CCInstance) -> Decision:
    """Decide whether at most r = m - k edges must be discarded, by the two-way branching."""
    g = inst.graph
    if inst.k <= 0:
        return Decision(True, frozenset())
    if inst.k > g.m:
        return Decision(False)
    cg = build_conflict(g)
    witness = _branch(cg, set(range(g.m)), inst.r, [0])
    return Decision(witness is not None, witness)


def _branch(cg: ConflictGraph, alive: set[int], budget: int, counter: list[int]) -> frozenset | None:
    pair = _first_conflict(cg, alive)
    if pair is None:
        return frozenset(alive)
    if budget == 0:
        return None
    counter[0] += 1
    for drop in pair:
        alive.discard(drop)
        found = _branch(cg, alive, budget - 1, counter)
        alive.add(drop)
        if found is not None:
            return found
    return None


def branch_unstable(inst: CCInstance | ColoredHypergraph) -> Solution:
    """Optimum by iterative deepening on the discard budget r."""
    g = inst.graph if isinstance(inst, CCInstance) else inst
    cg = build_conflict(g)
    counter = [0]
    for budget in range(g.m + 1):
        found = _branch(cg, set(range(g.m)), budget, counter)
        if found is not None:
            return Solution(len(found), found, {"branches": counter[0], "r": budget})
    raise AssertionError("discarding every edge always succeeds")


# ------------------------------------------------------ two colors


def solve_two_colors(inst: CCInstance | ColoredHypergraph) -> Solution:
    """Exact for at most two colors: the conflict graph is bipartite, so König applies."""
    g = inst.graph if isinstance(inst, CCInstance) else inst
    colors = sorted(g.used_colors)
    if len(colors) > 2:
        raise PreconditionError(f"two-color solver needs at most 2 colors, got {len(colors)}")
    cg = build_conflict(g)
    B = nx.Graph()
    B.add_nodes_from(range(g.m))
    B.add_edges_from(cg.edges())
    top = [i for i, e in enumerate(g.edges) if colors and e.color == colors[0]]
    matching = bipartite.hopcroft_karp_matching(B, top_nodes=top)
    cover = bipartite.to_vertex_cover(B, matching, top_nodes=top)
    F = frozenset(range(g.m)) - frozenset(cover)
    return Solution(len(F), F, {"matching": len(matching) // 2})
