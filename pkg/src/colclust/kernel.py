"""Polynomial kernel in the number k of stable edges.

Rules, applied in this priority with a restart after every change:

1. a greedy maximal matching of size k answers YES;
2. a color with k edges answers YES;
3. a vertex of chromatic degree at least 2k+1 (dk+1 on order-d hypergraphs)
   loses all edges of its least frequent incident color;
4. (graphs only) too many vertices of the matching cover that see many
   colors with many private neighbors answer YES.

Isolated vertices are dropped at the end.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field

from .core import CCInstance, ColoredHypergraph, Edge


def ceil_sqrt(k: int) -> int:
    return 0 if k <= 0 else math.isqrt(k - 1) + 1


@dataclass(frozen=True)
class RuleApplication:
    rule: int
    detail: str

    def __str__(self) -> str:
        return f"rule {self.rule} {self.detail}"


@dataclass
class KernelResult:
    decided_yes: bool
    instance: CCInstance | None = None
    witness: frozenset[int] | None = None
    rule: int | None = None
    edge_map: tuple[int, ...] = ()
    vertex_map: tuple[int, ...] = ()
    log: list[RuleApplication] = field(default_factory=list)

    @property
    def outcome(self) -> str:
        return f"yes(rule {self.rule})" if self.decided_yes else "reduced"

    def log_text(self) -> str:
        return "".join(f"{entry}\n" for entry in self.log)

    def lift(self, reduced_edges) -> frozenset[int]:
        """Map edge indices of the reduced instance back to the input instance."""
        return frozenset(self.edge_map[i] for i in reduced_edges)


class _State:
    """Mutable alive-edge view of an instance."""

    def __init__(self, g: ColoredHypergraph):
        self.g = g
        self.alive = [True] * g.m
        self.inc: list[dict[int, set[int]]] = [defaultdict(set) for _ in range(g.n)]
        self.count: dict[int, int] = defaultdict(int)
        for i, e in enumerate(g.edges):
            for v in e.vertices:
                self.inc[v][e.color].add(i)
            self.count[e.color] += 1

    def delete(self, i: int) -> None:
        if not self.alive[i]:
            return
        self.alive[i] = False
        e = self.g.edges[i]
        for v in e.vertices:
            bucket = self.inc[v][e.color]
            bucket.discard(i)
            if not bucket:
                del self.inc[v][e.color]
        self.count[e.color] -= 1

    def alive_ids(self):
        return (i for i, a in enumerate(self.alive) if a)


def _greedy_matching(st: _State) -> list[int]:
    used: set[int] = set()
    M = []
    for i in st.alive_ids():
        vs = st.g.edges[i].vertices
        if used.isdisjoint(vs):
            used.update(vs)
            M.append(i)
    return M


def rule_matching(inst: CCInstance, _st: _State | None = None):
    """Rule 1. Returns ``(witness or None, cover S)``."""
    st = _st or _State(inst.graph)
    M = _greedy_matching(st)
    S = {v for i in M for v in st.g.edges[i].vertices}
    if len(M) >= inst.k:
        return frozenset(M[: max(inst.k, 0)]), S
    return None, S


def rule_one_color(inst: CCInstance, _st: _State | None = None):
    """Rule 2. Returns k edges of one color, or None."""
    st = _st or _State(inst.graph)
    for c in sorted(st.count):
        if st.count[c] >= inst.k:
            ids = [i for i in st.alive_ids() if st.g.edges[i].color == c]
            return frozenset(ids[: inst.k])
    return None


def chromatic_threshold(k: int, order: int) -> int:
    return max(order, 2) * k + 1


def _fire_rule3(st: _State, v: int, threshold: int, log: list[RuleApplication]) -> None:
    # deleting color c at v leaves the other buckets at v alone, so one sort suffices
    order = sorted(st.inc[v], key=lambda col: (len(st.inc[v][col]), col))
    for c in order:
        if len(st.inc[v]) < threshold:
            break
        doomed = sorted(st.inc[v][c])
        for i in doomed:
            st.delete(i)
        log.append(RuleApplication(3, f"v={v} color={c} deleted={','.join(map(str, doomed))}"))


def rule_chromatic_degree(inst: CCInstance) -> CCInstance | None:
    """Rule 3 at the lowest vertex it applies to; returns the reduced instance or None."""
    g = inst.graph
    st = _State(g)
    thr = chromatic_threshold(inst.k, g.order)
    for v in range(g.n):
        if len(st.inc[v]) >= thr:
            _fire_rule3(st, v, thr, [])
            sub, _ = g.subgraph(st.alive_ids())
            return CCInstance(sub, inst.k)
    return None


def _outside_neighbors(st: _State, v: int, c: int, blocked: set[int]) -> dict[int, int]:
    """Neighbors of v via alive color-c edges outside ``blocked``, each with one edge id."""
    out: dict[int, int] = {}
    for i in sorted(st.inc[v].get(c, ())):
        for w in st.g.edges[i].vertices:
            if w != v and w not in blocked and w not in out:
                out[w] = i
    return out


def meet_in_middle_set(st: _State, S: set[int], k: int) -> list[int]:
    t0 = ceil_sqrt(k)
    T = []
    for v in sorted(S):
        rich = sum(1 for c in st.inc[v] if len(_outside_neighbors(st, v, c, S)) >= 2 * t0)
        if rich >= 2 * t0:
            T.append(v)
    return T


def greedy_meet_in_middle(st: _State, S: set[int], T: list[int], k: int) -> list[int] | None:
    """The greedy construction: at step q take 2t-(q-1) fresh edges of the best color."""
    t0 = ceil_sqrt(k)
    F: list[int] = []
    used_outside: set[int] = set()
    for q, v in enumerate(T[:t0], start=1):
        blocked = S | used_outside
        best_c, best = None, {}
        for c in sorted(st.inc[v]):
            cand = _outside_neighbors(st, v, c, blocked)
            if len(cand) > len(best):
                best_c, best = c, cand
        need = 2 * t0 - (q - 1)
        picks = sorted(best)[:need]
        F.extend(best[w] for w in picks)
        used_outside.update(picks)
    return F if len(F) >= k else None


def rule_meet_in_middle(inst: CCInstance, S: set[int] | None = None, _st: _State | None = None):
    """Rule 4 (graphs only). Returns the greedy witness, or None when the rule does not fire."""
    if not inst.graph.is_graph:
        raise ValueError("the meet-in-the-middle rule is defined for graphs only")
    st = _st or _State(inst.graph)
    if S is None:
        _, S = rule_matching(inst, st)
    T = meet_in_middle_set(st, S, inst.k)
    if len(T) < ceil_sqrt(inst.k):
        return None
    F = greedy_meet_in_middle(st, S, T, inst.k)
    return None if F is None else frozenset(F[: inst.k])


def kernelize(inst: CCInstance) -> KernelResult:
    g = inst.graph
    k = inst.k
    log: list[RuleApplication] = []
    st = _State(g)
    graph_mode = g.is_graph
    thr = chromatic_threshold(k, g.order)
    while True:
        witness, S = rule_matching(inst, st)
        if witness is not None:
            log.append(RuleApplication(1, f"matching={','.join(map(str, sorted(witness)))}"))
            return KernelResult(True, witness=witness, rule=1, log=log)
        witness = rule_one_color(inst, st)
        if witness is not None:
            log.append(RuleApplication(2, f"color={g.edges[min(witness)].color}"))
            return KernelResult(True, witness=witness, rule=2, log=log)
        fired = False
        # one sweep over all vertices before rechecking rules 1 and 2; deletions
        # never grow a color class or a maximum matching
        for v in range(g.n):
            if len(st.inc[v]) >= thr:
                _fire_rule3(st, v, thr, log)
                fired = True
        if fired:
            continue
        if graph_mode and k >= 1:
            T = meet_in_middle_set(st, S, k)
            if len(T) >= ceil_sqrt(k):
                F = greedy_meet_in_middle(st, S, T, k)
                if F is not None:
                    log.append(RuleApplication(4, f"T={','.join(map(str, T))}"))
                    return KernelResult(True, witness=frozenset(F[:k]), rule=4, log=log)
        break

    edge_ids = list(st.alive_ids())
    used = sorted({v for i in edge_ids for v in g.edges[i].vertices})
    relabel = {v: j for j, v in enumerate(used)}
    if len(used) < g.n:
        log.append(RuleApplication(0, f"dropped {g.n - len(used)} isolated vertices"))
    edges = tuple(Edge(tuple(relabel[v] for v in g.edges[i].vertices), g.edges[i].color) for i in edge_ids)
    reduced = CCInstance(ColoredHypergraph(len(used), edges, g.num_colors), k)
    return KernelResult(False, reduced, edge_map=tuple(edge_ids), vertex_map=tuple(used), log=log)


# ------------------------------------------------------------- audits


def postcondition_violations(inst: CCInstance) -> list[str]:
    """Structural guarantees a reduced instance must meet."""
    g, k = inst.graph, inst.k
    st = _State(g)
    out = []
    M = _greedy_matching(st)
    if len(M) >= k:
        out.append(f"greedy matching of size {len(M)} >= k")
    if any(c >= k for c in st.count.values() if c):
        out.append("a color class has k edges")
    thr = chromatic_threshold(k, g.order)
    if any(len(st.inc[v]) >= thr for v in range(g.n)):
        out.append("chromatic degree above threshold")
    if any(not st.inc[v] for v in range(g.n)):
        out.append("isolated vertex")
    if g.is_graph and k >= 1:
        S = {v for i in M for v in g.edges[i].vertices}
        T = meet_in_middle_set(st, S, k)
        if len(T) >= ceil_sqrt(k) and greedy_meet_in_middle(st, S, T, k) is not None:
            out.append(f"|T|={len(T)} >= ceil(sqrt(k))")
    return out


@dataclass(frozen=True)
class SizeTerms:
    """Edge counts grouped as in the counting argument behind the k^(5/2) bound."""

    cover: int
    t_size: int
    inside_cover: int
    at_t: int
    x_edges: int
    y_edges: int
    max_x: int
    max_y: int
    total_edges: int


def size_terms(inst: CCInstance) -> SizeTerms:
    g, k = inst.graph, inst.k
    st = _State(g)
    M = _greedy_matching(st)
    S = {v for i in M for v in g.edges[i].vertices}
    t0 = ceil_sqrt(k)
    T = set(meet_in_middle_set(st, S, k))
    inside = sum(1 for e in g.edges if all(v in S for v in e.vertices))
    at_t = sum(1 for e in g.edges if any(v in T for v in e.vertices))
    x_edges = y_edges = max_x = max_y = 0
    for v in sorted(S - T):
        X = Y = 0
        for c, ids in st.inc[v].items():
            outside = [i for i in ids if any(w not in S for w in g.edges[i].vertices)]
            if not outside:
                continue
            if len(_outside_neighbors(st, v, c, S)) >= 2 * t0:
                X += 1
                x_edges += len(outside)
            else:
                Y += 1
                y_edges += len(outside)
        max_x, max_y = max(max_x, X), max(max_y, Y)
    return SizeTerms(len(S), len(T), inside, at_t, x_edges, y_edges, max_x, max_y, g.m)
