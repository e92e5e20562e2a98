"""Lower bounds on the number of unstable edges r and on the optimum k.

All values are exact fractions; every bound here has denominator at most 2d.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from ._matching import lp_vertex_cover, max_matching_pairs
from .conflict import ConflictGraph, build_conflict, max_independent_set
from .core import CCInstance, ColoredHypergraph, PreconditionError


def _require_graph(g: ColoredHypergraph, what: str) -> None:
    if not g.is_graph:
        raise PreconditionError(f"{what} is defined for graphs only (order {g.order})")


def _local_excess(g: ColoredHypergraph, v: int) -> tuple[int, int]:
    cd = g.color_degrees(v)
    deg = sum(cd.values())
    return deg, deg - max(cd.values(), default=0)


def rho(inst: CCInstance | ColoredHypergraph) -> Fraction:
    g = inst.graph if isinstance(inst, CCInstance) else inst
    _require_graph(g, "rho")
    return Fraction(sum(_local_excess(g, v)[1] for v in range(g.n)), 2)


def _capped_sum(g: ColoredHypergraph) -> Fraction:
    total = Fraction(0)
    for v in range(g.n):
        deg, excess = _local_excess(g, v)
        total += min(Fraction(excess), Fraction(deg, 2))
    return total


def rho_prime(inst: CCInstance | ColoredHypergraph) -> Fraction:
    g = inst.graph if isinstance(inst, CCInstance) else inst
    _require_graph(g, "rho_prime")
    return _capped_sum(g) / 2


def rho_hyper(inst: CCInstance | ColoredHypergraph) -> Fraction:
    g = inst.graph if isinstance(inst, CCInstance) else inst
    if g.order == 0:
        return Fraction(0)
    return _capped_sum(g) / g.order


# ------------------------------------------------------------- matchings


@dataclass(frozen=True)
class MatchingInfo:
    edges: frozenset[int]
    induced: bool = False

    @property
    def size(self) -> int:
        return len(self.edges)


def greedy_matching(g: ColoredHypergraph) -> MatchingInfo:
    used: set[int] = set()
    M = []
    for i, e in enumerate(g.edges):
        if used.isdisjoint(e.vertices):
            used.update(e.vertices)
            M.append(i)
    return MatchingInfo(frozenset(M))


def max_matching(g: ColoredHypergraph) -> MatchingInfo:
    """Maximum matching on graphs (blossom); maximal greedy matching on hypergraphs."""
    if not g.is_graph:
        return greedy_matching(g)
    chosen = max_matching_pairs((e.vertices[0], e.vertices[1], i) for i, e in enumerate(g.edges))
    return MatchingInfo(frozenset(chosen))


def is_matching(g: ColoredHypergraph, M: Iterable[int]) -> bool:
    used: set[int] = set()
    for i in M:
        vs = g.edges[i].vertices
        if not used.isdisjoint(vs):
            return False
        used.update(vs)
    return True


def is_induced_matching(g: ColoredHypergraph, M: Iterable[int]) -> bool:
    """No edge of g touches two distinct members of M (members pairwise disjoint)."""
    owner: dict[int, int] = {}
    for i in M:
        for v in g.edges[i].vertices:
            if v in owner:
                return False
            owner[v] = i
    for e in g.edges:
        hit = {owner[v] for v in e.vertices if v in owner}
        if len(hit) > 1:
            return False
    return True


def _induced_conflicts(g: ColoredHypergraph) -> dict[int, set[int]]:
    # two edges clash if they intersect or some edge touches both
    adj: dict[int, set[int]] = {i: set() for i in range(g.m)}
    touch = [set() for _ in range(g.m)]  # edges meeting edge i (including i)
    for v in range(g.n):
        for a in g.incidence[v]:
            touch[a].update(g.incidence[v])
    for f in range(g.m):
        members = sorted(touch[f])
        for a, b in itertools.combinations(members, 2):
            adj[a].add(b)
            adj[b].add(a)
    return adj


def induced_matching(
    g: ColoredHypergraph, mode: str = "greedy", provided: Iterable[int] | None = None
) -> MatchingInfo:
    if mode == "provided":
        M = frozenset(provided or ())
        if not is_induced_matching(g, M):
            raise PreconditionError("provided matching is not induced")
        return MatchingInfo(M, True)
    if mode == "greedy":
        chosen: list[int] = []
        for i in range(g.m):
            if is_induced_matching(g, chosen + [i]):
                chosen.append(i)
        return MatchingInfo(frozenset(chosen), True)
    if mode == "exact-small":
        if g.m > 40:
            raise PreconditionError("exact induced matching is limited to small instances")
        mis, _ = max_independent_set(_induced_conflicts(g))
        return MatchingInfo(frozenset(mis), True)
    raise ValueError(f"unknown mode {mode!r}")


# ------------------------------------------------------------- LP and duals


def lp_value(cg: ConflictGraph) -> Fraction:
    return lp_vertex_cover(cg.as_dict())


@dataclass
class DualCertificate:
    """A feasible solution of the matching LP dual to the vertex cover relaxation."""

    y: dict[tuple[int, int], Fraction] = field(default_factory=dict)

    @property
    def value(self) -> Fraction:
        return sum(self.y.values(), Fraction(0))

    def is_feasible(self, cg: ConflictGraph) -> bool:
        load = [Fraction(0)] * cg.m
        for (a, b), val in self.y.items():
            if not (0 <= val <= 1) or b not in cg.adj[a]:
                return False
            load[a] += val
            load[b] += val
        return all(x <= 1 for x in load)


def multipartite_dual(parts: list[list[int]]) -> dict[tuple[int, int], Fraction]:
    """Dual LP solution on the complete multipartite graph with the given parts.

    Value is at least the sum of the non-largest parts when the largest part
    dominates, and at least half the node count otherwise.
    """
    parts = [list(p) for p in parts if p]
    z: dict[tuple[int, int], Fraction] = {}

    def put(a, b, val):
        z[(min(a, b), max(a, b))] = z.get((min(a, b), max(a, b)), Fraction(0)) + val

    while True:
        # ties by original part position keep this deterministic
        order = sorted(range(len(parts)), key=lambda i: -len(parts[i]))
        sizes = [len(parts[i]) for i in order]
        total = sum(sizes)
        if total < 2 or len([s for s in sizes if s]) < 2:
            return z
        big = parts[order[0]]
        if sizes[0] >= total - sizes[0]:
            pool = list(big)
            for i in order[1:]:
                for x in parts[i]:
                    put(pool.pop(), x, Fraction(1))
            return z
        if total <= 3:
            nodes = [x for p in parts for x in p]
            for a, b in itertools.combinations(nodes, 2):
                if _part_of(parts, a) != _part_of(parts, b):
                    put(a, b, Fraction(1, 2))
            return z
        u = parts[order[0]].pop()
        w = parts[order[1]].pop()
        put(u, w, Fraction(1))


def _part_of(parts: list[list[int]], x: int) -> int:
    for i, p in enumerate(parts):
        if x in p:
            return i
    raise KeyError(x)


def dual_certificate(inst: CCInstance | ColoredHypergraph) -> DualCertificate:
    """Dual certificate whose value is at least rho_prime (rho_hyper on hypergraphs).

    Around each vertex the incident edges induce a complete multipartite
    subgraph of the conflict graph (one part per color); its local dual is
    scaled by 1/order and summed over all vertices.
    """
    g = inst.graph if isinstance(inst, CCInstance) else inst
    cert = DualCertificate()
    if g.order == 0:
        return cert
    scale = Fraction(1, g.order)
    for v in range(g.n):
        by_color: dict[int, list[int]] = {}
        for i in g.incidence[v]:
            by_color.setdefault(g.edges[i].color, []).append(i)
        parts = [by_color[c] for c in sorted(by_color)]
        for key, val in multipartite_dual(parts).items():
            cert.y[key] = cert.y.get(key, Fraction(0)) + scale * val
    return cert


# ------------------------------------------------------------- report


@dataclass
class GapReport:
    k: int
    r: int
    matching: int
    induced_matching: int
    bounds: dict[str, Fraction]
    verdict: str  # "YES", "NO" or "?"
    reasons: list[str] = field(default_factory=list)

    def lines(self) -> list[str]:
        out = [
            f"M(G) {self.matching} gap k-M {self.k - self.matching}",
            f"I(G) {self.induced_matching} gap k-I {self.k - self.induced_matching}",
        ]
        for name, val in self.bounds.items():
            out.append(f"{name} {val} gap r-{name} {self.r - val}")
        out.append(f"verdict {self.verdict}" + (f" ({'; '.join(self.reasons)})" if self.reasons else ""))
        return out


def gap_parameters(inst: CCInstance, induced: MatchingInfo | None = None) -> GapReport:
    g = inst.graph
    M = max_matching(g)
    if induced is None:
        induced = induced_matching(g, "exact-small" if g.m <= 20 else "greedy")
    bounds: dict[str, Fraction] = {}
    if g.is_graph:
        bounds["rho"] = rho(g)
        bounds["rho'"] = rho_prime(g)
    else:
        bounds["rho_H"] = rho_hyper(g)
    bounds["alpha"] = lp_value(build_conflict(g))
    reasons = []
    verdict = "?"
    if M.size >= inst.k or inst.k <= 0:
        verdict = "YES"
        reasons.append("matching of size >= k")
    for name, val in bounds.items():
        if inst.r < val:
            verdict = "NO"
            reasons.append(f"r < {name}")
    if verdict == "YES" and any(r.startswith("r <") for r in reasons):
        raise AssertionError("contradictory bounds")
    return GapReport(inst.k, inst.r, M.size, induced.size, bounds, verdict, reasons)


def matching_counting_terms(g: ColoredHypergraph, F: Iterable[int], M: Iterable[int]) -> tuple[int, int, int]:
    """(2|F|, sum of deg_F over unmatched vertices, sum of deg_F(e) over e in M) for a graph."""
    _require_graph(g, "the matching-counting identity")
    F = list(F)
    degF = [0] * g.n
    for i in F:
        for v in g.edges[i].vertices:
            degF[v] += 1
    matched: set[int] = set()
    on_m = 0
    for i in M:
        matched.update(g.edges[i].vertices)
        on_m += sum(degF[v] for v in g.edges[i].vertices)
    unmatched = sum(degF[v] for v in range(g.n) if v not in matched)
    return 2 * len(F), unmatched, on_m
