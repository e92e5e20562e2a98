"""Instance model, stability semantics, brute-force oracles and the text formats.

Colors are dense ids ``0..num_colors-1``; color 0 doubles as the default
vertex color for vertices that no chosen edge touches.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter, deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

DEFAULT_COLOR = 0

StableSet = frozenset  # frozenset[int] of edge indices
VertexColoring = tuple  # tuple[int, ...] indexed by vertex id


class InstanceError(ValueError):
    """An instance violates a structural invariant."""


class ParseError(InstanceError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class PreconditionError(ValueError):
    """An algorithm was called outside its declared input class."""


class SearchSpaceTooLarge(RuntimeError):
    pass


@dataclass(frozen=True)
class Edge:
    vertices: tuple[int, ...]
    color: int

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))

    @cached_property
    def vset(self) -> frozenset[int]:
        return frozenset(self.vertices)

    def __len__(self) -> int:
        return len(self.vertices)


@dataclass(frozen=True)
class ColoredHypergraph:
    n: int
    edges: tuple[Edge, ...]
    num_colors: int

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple(self.edges))

    @classmethod
    def from_edges(
        cls,
        n: int,
        edges: Iterable[tuple[Sequence[int], int]],
        num_colors: int | None = None,
    ) -> ColoredHypergraph:
        es = tuple(Edge(tuple(vs), c) for vs, c in edges)
        if num_colors is None:
            num_colors = max((e.color for e in es), default=0) + 1
        return cls(n, es, num_colors)

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def order(self) -> int:
        return max((len(e) for e in self.edges), default=0)

    @cached_property
    def is_graph(self) -> bool:
        return all(len(e) == 2 for e in self.edges)

    @cached_property
    def incidence(self) -> tuple[tuple[int, ...], ...]:
        inc: list[list[int]] = [[] for _ in range(self.n)]
        for i, e in enumerate(self.edges):
            for v in e.vertices:
                inc[v].append(i)
        return tuple(tuple(x) for x in inc)

    @cached_property
    def used_colors(self) -> frozenset[int]:
        return frozenset(e.color for e in self.edges)

    def degree(self, v: int) -> int:
        return len(self.incidence[v])

    def color_degrees(self, v: int) -> Counter:
        return Counter(self.edges[i].color for i in self.incidence[v])

    def chromatic_degree(self, v: int) -> int:
        return len({self.edges[i].color for i in self.incidence[v]})

    def neighbors(self, v: int) -> set[int]:
        out = set()
        for i in self.incidence[v]:
            out.update(self.edges[i].vertices)
        out.discard(v)
        return out

    def subgraph(self, keep: Iterable[int]) -> tuple[ColoredHypergraph, tuple[int, ...]]:
        """Edge-induced subgraph on the same vertex set; returns it with the index map."""
        idx = tuple(sorted(set(keep)))
        return ColoredHypergraph(self.n, tuple(self.edges[i] for i in idx), self.num_colors), idx


@dataclass(frozen=True)
class CCInstance:
    graph: ColoredHypergraph
    k: int

    @property
    def r(self) -> int:
        return self.graph.m - self.k


@dataclass(frozen=True)
class Solution:
    size: int
    edges: frozenset[int]
    stats: dict = field(default_factory=dict, compare=False, hash=False)


@dataclass(frozen=True)
class Decision:
    answer: bool
    witness: frozenset[int] | None = None
    note: str = ""

    def __bool__(self) -> bool:
        return self.answer


@dataclass(frozen=True)
class DegreeProfile:
    deg: tuple[int, ...]
    color_deg: tuple[Counter, ...]
    chromatic: tuple[int, ...]


def degree_profile(g: ColoredHypergraph) -> DegreeProfile:
    cds = tuple(g.color_degrees(v) for v in range(g.n))
    return DegreeProfile(
        deg=tuple(sum(c.values()) for c in cds),
        color_deg=cds,
        chromatic=tuple(len(c) for c in cds),
    )


def validate(g: ColoredHypergraph) -> str | None:
    """Return a description of the first violated invariant, or None."""
    if g.n < 0:
        return "negative vertex count"
    if g.num_colors < 1 and g.edges:
        return "no colors declared"
    for i, e in enumerate(g.edges):
        if not e.vertices:
            return f"edge {i}: empty edge"
        if len(set(e.vertices)) != len(e.vertices):
            return f"edge {i}: duplicate vertex"
        for v in e.vertices:
            if not isinstance(v, int) or not 0 <= v < g.n:
                return f"edge {i}: vertex {v} out of range"
        if not 0 <= e.color < g.num_colors:
            return f"edge {i}: color out of range"
    return None


def check(g: ColoredHypergraph) -> None:
    problem = validate(g)
    if problem is not None:
        raise InstanceError(problem)


def _check_indices(g: ColoredHypergraph, F: Iterable[int]) -> list[int]:
    out = list(F)
    for i in out:
        if not 0 <= i < g.m:
            raise IndexError(f"edge index {i} out of range for m={g.m}")
    return out


def is_stable(g: ColoredHypergraph, F: Iterable[int]) -> bool:
    seen: dict[int, int] = {}
    for i in _check_indices(g, F):
        e = g.edges[i]
        for v in e.vertices:
            if seen.setdefault(v, e.color) != e.color:
                return False
    return True


def coloring_of(g: ColoredHypergraph, F: Iterable[int]) -> VertexColoring:
    f = [DEFAULT_COLOR] * g.n
    assigned = [False] * g.n
    for i in _check_indices(g, F):
        e = g.edges[i]
        for v in e.vertices:
            if assigned[v] and f[v] != e.color:
                raise ValueError("edge set is not stable")
            f[v] = e.color
            assigned[v] = True
    return tuple(f)


def stable_under(g: ColoredHypergraph, f: Sequence[int]) -> StableSet:
    return frozenset(
        i for i, e in enumerate(g.edges) if all(f[v] == e.color for v in e.vertices)
    )


def edge_components(g: ColoredHypergraph, edge_ids: Iterable[int] | None = None) -> list[list[int]]:
    """Connected components of the hypergraph spanned by ``edge_ids``, as edge lists."""
    ids = range(g.m) if edge_ids is None else edge_ids
    parent: dict[int, int] = {}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    owner: dict[int, int] = {}
    ids = list(ids)
    for i in ids:
        parent[i] = i
    for i in ids:
        for v in g.edges[i].vertices:
            if v in owner:
                a, b = find(owner[v]), find(i)
                if a != b:
                    parent[max(a, b)] = min(a, b)
            else:
                owner[v] = i
    comps: dict[int, list[int]] = {}
    for i in ids:
        comps.setdefault(find(i), []).append(i)
    return list(comps.values())


def _oracle_component(g: ColoredHypergraph, comp: list[int], target: int | None):
    # vertex order: BFS over the component so edges close early
    verts: list[int] = []
    seen = set()
    start = g.edges[comp[0]].vertices[0]
    queue = deque([start])
    seen.add(start)
    comp_set = set(comp)
    while queue:
        v = queue.popleft()
        verts.append(v)
        for i in g.incidence[v]:
            if i in comp_set:
                for w in g.edges[i].vertices:
                    if w not in seen:
                        seen.add(w)
                        queue.append(w)
    # high-degree vertices first: once hubs are fixed the bound is nearly tight
    bfs_pos = {v: p for p, v in enumerate(verts)}
    deg = {v: sum(1 for i in g.incidence[v] if i in comp_set) for v in verts}
    verts.sort(key=lambda v: (-deg[v], bfs_pos[v]))
    pos = {v: p for p, v in enumerate(verts)}
    closing: list[list[int]] = [[] for _ in verts]  # edges whose last vertex is here
    touching: list[list[int]] = [[] for _ in verts]
    for i in comp:
        e = g.edges[i]
        closing[max(pos[v] for v in e.vertices)].append(i)
        for v in e.vertices:
            touching[pos[v]].append(i)
    cands = []
    for v in verts:
        cs = sorted({g.edges[i].color for i in g.incidence[v] if i in comp_set} | {DEFAULT_COLOR})
        cands.append(cs)

    # |F| = sum over v of sum_{e in F at v} 1/|e|, and F uses one color per vertex,
    # so sum_v max_c (alive color-c weight at v) bounds every completion
    L = math.lcm(*{len(g.edges[i]) for i in comp})
    weight = {i: L // len(g.edges[i]) for i in comp}
    acc = [Counter() for _ in verts]
    for i in comp:
        for v in g.edges[i].vertices:
            acc[pos[v]][g.edges[i].color] += weight[i]
    vmax = [max(a.values(), default=0) for a in acc]
    bound = [sum(vmax)]

    color = [None] * len(verts)
    alive = {i: True for i in comp}  # still possibly stable under the partial coloring
    best = [-1, None]
    closed = [0]

    def kill(i: int, sign: int) -> None:
        e = g.edges[i]
        for v in e.vertices:
            q = pos[v]
            acc[q][e.color] -= sign * weight[i]
            new = max(acc[q].values(), default=0)
            bound[0] += new - vmax[q]
            vmax[q] = new

    def dfs(p: int):
        if target is not None and best[0] >= target:
            return
        if bound[0] // L <= best[0]:
            return
        if p == len(verts):
            best[0] = closed[0]
            best[1] = tuple(color)
            return
        for c in sorted(cands[p], key=lambda x: -acc[p][x]):
            color[p] = c
            killed = []
            for i in touching[p]:
                if alive[i] and g.edges[i].color != c:
                    alive[i] = False
                    killed.append(i)
                    kill(i, 1)
            gained = sum(1 for i in closing[p] if alive[i])
            closed[0] += gained
            dfs(p + 1)
            closed[0] -= gained
            for i in killed:
                alive[i] = True
                kill(i, -1)
            if target is not None and best[0] >= target:
                break
        color[p] = None

    dfs(0)
    chosen = [i for i in comp if all(best[1][pos[v]] == g.edges[i].color for v in g.edges[i].vertices)]
    return best[0], chosen


def oracle_max_stable(
    g: ColoredHypergraph, limit: int | None = 10**7, target: int | None = None
) -> Solution:
    """Exact maximum stable set by enumerating vertex colorings.

    Each vertex ranges over its incident colors plus the default color; a
    non-incident color can never stabilize an edge, so nothing is lost.
    Connected components are searched independently. ``limit`` bounds the
    per-component product of candidate counts (None disables the guard).
    With ``target`` set, the search may stop once that many edges are found,
    in which case the returned size is a lower bound that reaches the target.
    """
    total = 0
    witness: list[int] = []
    comps = sorted(edge_components(g), key=min)
    if limit is not None:
        for comp in comps:
            space = 1
            vs = {v for i in comp for v in g.edges[i].vertices}
            for v in vs:
                space *= len({g.edges[i].color for i in g.incidence[v]} | {DEFAULT_COLOR})
            if space > limit:
                raise SearchSpaceTooLarge(f"coloring space {space} exceeds limit {limit}")
    for comp in comps:
        sub_target = None if target is None else max(0, target - total)
        size, chosen = _oracle_component(g, comp, sub_target)
        total += size
        witness.extend(chosen)
        if target is not None and total >= target:
            break
    return Solution(total, frozenset(witness))


def exhaustive_max_stable(g: ColoredHypergraph, max_m: int = 20) -> Solution:
    """Second oracle: every edge subset, largest first."""
    if g.m > max_m:
        raise SearchSpaceTooLarge(f"m={g.m} exceeds {max_m}")
    for size in range(g.m, -1, -1):
        for F in itertools.combinations(range(g.m), size):
            if is_stable(g, F):
                return Solution(size, frozenset(F))
    return Solution(0, frozenset())


# ---------------------------------------------------------------- text formats


def read_instance(text: str) -> CCInstance:
    header = None
    edges: list[Edge] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tok = line.split()
        if tok[0] == "p":
            if header is not None:
                raise ParseError(lineno, "duplicate header")
            if len(tok) != 6 or tok[1] != "cc":
                raise ParseError(lineno, "expected 'p cc <n> <m> <colors> <k>'")
            try:
                header = tuple(int(t) for t in tok[2:])
            except ValueError:
                raise ParseError(lineno, "non-integer header field") from None
            if min(header) < 0:
                raise ParseError(lineno, "negative header field")
        elif tok[0] == "e":
            if header is None:
                raise ParseError(lineno, "edge before header")
            if len(tok) < 3:
                raise ParseError(lineno, "edge needs a color and at least one vertex")
            try:
                color = int(tok[1])
            except ValueError:
                raise ParseError(lineno, f"malformed color token {tok[1]!r}") from None
            try:
                vs = tuple(int(t) for t in tok[2:])
            except ValueError:
                raise ParseError(lineno, "malformed vertex token") from None
            e = Edge(vs, color)
            n, _, nc, _ = header
            if not 0 <= color < nc:
                raise ParseError(lineno, f"color {color} out of range")
            if len(set(vs)) != len(vs):
                raise ParseError(lineno, "duplicate vertex in edge")
            if any(not 0 <= v < n for v in vs):
                raise ParseError(lineno, "vertex out of range")
            edges.append(e)
        else:
            raise ParseError(lineno, f"unknown line type {tok[0]!r}")
    if header is None:
        raise ParseError(0, "missing header")
    n, m, nc, k = header
    if len(edges) != m:
        raise ParseError(0, f"header declares {m} edges, found {len(edges)}")
    return CCInstance(ColoredHypergraph(n, tuple(edges), nc), k)


def write_instance(inst: CCInstance) -> str:
    g = inst.graph
    lines = [f"p cc {g.n} {g.m} {g.num_colors} {inst.k}"]
    lines += ["e " + " ".join(map(str, (e.color, *e.vertices))) for e in g.edges]
    return "\n".join(lines) + "\n"


def write_solution(edges: Iterable[int]) -> str:
    F = sorted(edges)
    return "\n".join([f"s {len(F)}"] + [f"f {i}" for i in F]) + "\n"


def read_solution(text: str) -> frozenset[int]:
    size = None
    F = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tok = line.split()
        try:
            if tok[0] == "s" and len(tok) == 2:
                size = int(tok[1])
            elif tok[0] == "f" and len(tok) == 2:
                F.append(int(tok[1]))
            else:
                raise ParseError(lineno, "expected 's <size>' or 'f <edge-index>'")
        except ValueError:
            raise ParseError(lineno, "non-integer token") from None
    if size is not None and size != len(F):
        raise ParseError(0, f"size line says {size}, found {len(F)} edges")
    return frozenset(F)
