"""Structural solvers on graphs: a table DP over a spanning tree whose cost is
exponential only in the local feedback edge number, a linear DP on forests,
and a wrapper that brute-forces a small edge deletion set.
"""

from __future__ import annotations

import itertools
import random
from collections import Counter
from dataclasses import dataclass
from typing import Iterable

from .conflict import solve_two_colors
from .core import CCInstance, ColoredHypergraph, PreconditionError, Solution, is_stable

NEG = float("-inf")


def _require_simple_graph(g: ColoredHypergraph) -> None:
    if not g.is_graph:
        raise PreconditionError("tree-based solvers need a graph (all edges of size 2)")


# ------------------------------------------------------------------ layouts


@dataclass(frozen=True)
class TreeLayout:
    """A rooted tree on all vertices plus the per-vertex split of non-tree edges.

    ``parent[root] == -1``. An edge of g whose endpoints are a tree
    parent/child pair is a tree edge (parallel copies included); all other
    edges are sorted into C1..C4 at every vertex their tree path visits.
    """

    root: int
    parent: tuple[int, ...]
    C1: tuple[frozenset[int], ...]
    C2: tuple[frozenset[int], ...]
    C3: tuple[frozenset[int], ...]
    C4: tuple[frozenset[int], ...]
    tree_edges: frozenset[int]

    @property
    def n(self) -> int:
        return len(self.parent)

    def local(self, v: int) -> int:
        return len(self.C1[v]) + len(self.C2[v]) + len(self.C3[v]) + len(self.C4[v])

    @property
    def lfe(self) -> int:
        return max((self.local(v) for v in range(self.n)), default=0)

    def children(self) -> list[list[int]]:
        ch: list[list[int]] = [[] for _ in range(self.n)]
        for v, p in enumerate(self.parent):
            if p >= 0:
                ch[p].append(v)
        return ch

    def dumps(self) -> str:
        lines = [f"t {self.root}"]
        lines += [f"p {v} {p}" for v, p in enumerate(self.parent) if p >= 0]
        return "\n".join(lines) + "\n"


def _postorder(root: int, ch: list[list[int]]) -> list[int]:
    out, stack = [], [(root, False)]
    while stack:
        v, done = stack.pop()
        if done:
            out.append(v)
            continue
        stack.append((v, True))
        for w in reversed(ch[v]):
            stack.append((w, False))
    return out


def build_layout(g: ColoredHypergraph, parent: Iterable[int], root: int) -> TreeLayout:
    _require_simple_graph(g)
    parent = tuple(parent)
    n = g.n
    if len(parent) != n or not 0 <= root < max(n, 1) or (n and parent[root] != -1):
        raise PreconditionError("layout does not match the instance")
    ch: list[list[int]] = [[] for _ in range(n)]
    for v, p in enumerate(parent):
        if v == root:
            continue
        if not 0 <= p < n:
            raise PreconditionError(f"vertex {v} has no valid parent")
        ch[p].append(v)
    depth = [-1] * n
    if n:
        depth[root] = 0
        stack = [root]
        while stack:
            v = stack.pop()
            for w in ch[v]:
                depth[w] = depth[v] + 1
                stack.append(w)
    if any(d < 0 for d in depth):
        raise PreconditionError("parent array is not a tree spanning all vertices")

    C = [[set() for _ in range(n)] for _ in range(4)]
    tree = set()
    for i, e in enumerate(g.edges):
        u, w = e.vertices
        if parent[u] == w or parent[w] == u:
            tree.add(i)
            continue
        a, b = u, w
        # climb to the lowest common ancestor, filing C1/C4 on the way
        while a != b:
            if depth[a] >= depth[b]:
                C[3 if a == u else 0][a].add(i)
                a = parent[a]
            else:
                C[3 if b == w else 0][b].add(i)
                b = parent[b]
        C[2 if a in (u, w) else 1][a].add(i)
    return TreeLayout(root, parent, *(tuple(frozenset(s) for s in part) for part in C), frozenset(tree))


def _simple_adjacency(g: ColoredHypergraph) -> list[list[int]]:
    adj = [set() for _ in range(g.n)]
    for e in g.edges:
        u, w = e.vertices
        adj[u].add(w)
        adj[w].add(u)
    return [sorted(a) for a in adj]


def _search_tree(adj, root, seen, order: str, rng: random.Random | None) -> list[tuple[int, int]]:
    links = []
    seen.add(root)
    frontier = [root]
    while frontier:
        v = frontier.pop(0) if order == "bfs" else frontier.pop()
        nbrs = list(adj[v])
        if rng is not None:
            rng.shuffle(nbrs)
        for w in nbrs:
            if w not in seen:
                seen.add(w)
                links.append((v, w))
                frontier.append(w)
    return links


def _layout_from_links(g, links_by_comp: list[tuple[int, list[tuple[int, int]]]]) -> TreeLayout:
    # virtual tree edges join the component roots; they carry no graph edge
    nbr = [[] for _ in range(g.n)]
    roots = [r for r, _ in links_by_comp]
    for r, links in links_by_comp:
        for a, b in links:
            nbr[a].append(b)
            nbr[b].append(a)
    for r in roots[1:]:
        nbr[roots[0]].append(r)
        nbr[r].append(roots[0])
    parent = [-1] * g.n
    if not g.n:
        return TreeLayout(0, (), (), (), (), (), frozenset())
    root = roots[0]
    seen = {root}
    stack = [root]
    while stack:
        v = stack.pop()
        for w in nbr[v]:
            if w not in seen:
                seen.add(w)
                parent[w] = v
                stack.append(w)
    return build_layout(g, parent, root)


def _components(adj) -> list[list[int]]:
    seen: set[int] = set()
    out = []
    for s in range(len(adj)):
        if s in seen:
            continue
        comp = [s]
        seen.add(s)
        for v in comp:
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    comp.append(w)
        out.append(sorted(comp))
    return out


def layout_from_search(g: ColoredHypergraph, order: str = "bfs", seed: int | None = None, roots=None) -> TreeLayout:
    """BFS, DFS or randomized search tree per component (``roots`` picks the start vertices)."""
    _require_simple_graph(g)
    adj = _simple_adjacency(g)
    rng = random.Random(seed) if seed is not None else None
    parts = []
    seen: set[int] = set()
    for idx, comp in enumerate(_components(adj)):
        r = comp[0]
        if roots is not None:
            r = roots[idx % len(roots)] % len(comp)
            r = comp[r]
        parts.append((r, _search_tree(adj, r, seen, order, rng)))
    return _layout_from_links(g, parts)


def _score(layout: TreeLayout) -> tuple[int, int]:
    return layout.lfe, sum(layout.local(v) for v in range(layout.n))


def _tree_links(layout: TreeLayout) -> set[frozenset[int]]:
    return {frozenset((v, p)) for v, p in enumerate(layout.parent) if p >= 0}


def _layout_from_edge_set(g, links: set[frozenset[int]], root: int) -> TreeLayout:
    nbr = [[] for _ in range(g.n)]
    for link in links:
        a, b = tuple(link)
        nbr[a].append(b)
        nbr[b].append(a)
    parent = [-1] * g.n
    seen = {root}
    stack = [root]
    while stack:
        v = stack.pop()
        for w in nbr[v]:
            if w not in seen:
                seen.add(w)
                parent[w] = v
                stack.append(w)
    return build_layout(g, parent, root)


def _tree_path(layout: TreeLayout, u: int, w: int) -> list[frozenset[int]]:
    up_u = [u]
    while layout.parent[up_u[-1]] >= 0:
        up_u.append(layout.parent[up_u[-1]])
    pos = {x: i for i, x in enumerate(up_u)}
    path_w = [w]
    while path_w[-1] not in pos:
        path_w.append(layout.parent[path_w[-1]])
    meet = path_w[-1]
    verts = up_u[: pos[meet] + 1] + path_w[-2::-1]
    return [frozenset(p) for p in zip(verts, verts[1:])]


def spanning_tree_search(g: ColoredHypergraph, budget: int = 200, seed: int = 0) -> TreeLayout:
    """Heuristic search for a tree of small lfe: search trees, then edge-swap descent."""
    _require_simple_graph(g)
    if g.n == 0:
        return layout_from_search(g)
    rng = random.Random(seed)
    cands = [layout_from_search(g, "bfs"), layout_from_search(g, "dfs")]
    for t in range(max(0, min(budget // 4, g.n))):
        cands.append(layout_from_search(g, "bfs", roots=[t]))
        cands.append(layout_from_search(g, "dfs", seed=rng.randrange(2**32), roots=[t]))
    best = min(cands, key=_score)
    spent = len(cands)
    improved = True
    while improved and spent < budget:
        improved = False
        links = _tree_links(best)
        non_tree = sorted({tuple(sorted(g.edges[i].vertices)) for i in range(g.m) if i not in best.tree_edges})
        for u, w in non_tree:
            for old in _tree_path(best, u, w):
                if spent >= budget:
                    break
                if old not in links:
                    continue  # virtual link between components
                trial = (links - {old}) | {frozenset((u, w))}
                cand = _layout_from_edge_set(g, trial, best.root)
                spent += 1
                if _score(cand) < _score(best):
                    best, improved = cand, True
                    break
            if improved or spent >= budget:
                break
    return best


def read_layout(text: str, g: ColoredHypergraph) -> TreeLayout:
    root = None
    parent = [-1] * g.n
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].split()
        if not line:
            continue
        try:
            if line[0] == "t":
                root = int(line[1])
            elif line[0] == "p":
                parent[int(line[1])] = int(line[2])
            else:
                raise ValueError(line[0])
        except (ValueError, IndexError) as exc:
            raise PreconditionError(f"layout line {lineno}: cannot parse {raw!r}") from exc
    if root is None:
        raise PreconditionError("layout has no root line")
    return build_layout(g, parent, root)


# ------------------------------------------------------------------ secw DP


def _candidate_colors(g: ColoredHypergraph, v: int) -> list[int]:
    cs = sorted({g.edges[i].color for i in g.incidence[v]})
    return cs or [0]


def _stable_subsets(g: ColoredHypergraph, pool: list[int], base: Iterable[int] = ()):
    """Subsets X of ``pool`` with X plus ``base`` stable, by incremental vertex coloring."""
    forced: dict[int, int] = {}
    for i in base:
        e = g.edges[i]
        for v in e.vertices:
            if forced.setdefault(v, e.color) != e.color:
                return
    chosen: list[int] = []

    def rec(p: int):
        if p == len(pool):
            yield tuple(chosen)
            return
        yield from rec(p + 1)
        e = g.edges[pool[p]]
        if all(forced.get(v, e.color) == e.color for v in e.vertices):
            fresh = [v for v in e.vertices if v not in forced]
            for v in fresh:
                forced[v] = e.color
            chosen.append(pool[p])
            yield from rec(p + 1)
            chosen.pop()
            for v in fresh:
                del forced[v]

    yield from rec(0)


def solve_secw_dp(inst: CCInstance | ColoredHypergraph, layout: TreeLayout | None = None) -> Solution:
    """Exact optimum by the boundary-set table D[v, c, S] over the layout tree."""
    g = inst.graph if isinstance(inst, CCInstance) else inst
    _require_simple_graph(g)
    if layout is None:
        layout = spanning_tree_search(g)
    if layout.n != g.n:
        raise PreconditionError("layout does not match the instance")
    if g.n == 0:
        return Solution(0, frozenset(), {"lfe": 0, "table": 0})
    ch = layout.children()
    # tree-edge multiplicities per (child, color)
    tcount: list[Counter] = [Counter() for _ in range(g.n)]
    tedges: list[dict[int, list[int]]] = [dict() for _ in range(g.n)]
    for i in layout.tree_edges:
        u, w = g.edges[i].vertices
        child = u if layout.parent[u] == w else w
        c = g.edges[i].color
        tcount[child][c] += 1
        tedges[child].setdefault(c, []).append(i)
    cand = [_candidate_colors(g, v) for v in range(g.n)]
    boundary = [sorted(layout.C1[v] | layout.C4[v]) for v in range(g.n)]
    D: list[dict] = [None] * g.n  # type: ignore[list-item]
    choice: list[dict] = [None] * g.n  # type: ignore[list-item]
    table_total = 0

    for v in _postorder(layout.root, ch):
        Dv: dict = {}
        Cv: dict = {}
        c4 = layout.C4[v]
        inner2 = sorted(layout.C2[v])
        # a child's best over its colors, given the color c of v and its boundary set
        child_best: dict = {}

        def best_child(w, c, key):
            hit = child_best.get((w, c, key))
            if hit is None:
                top, arg = NEG, None
                for c2 in cand[w]:
                    val = D[w].get((c2, key), NEG)
                    if val == NEG:
                        continue
                    if c2 == c:
                        val += tcount[w][c]
                    if val > top:
                        top, arg = val, c2
                hit = child_best[(w, c, key)] = (top, arg)
            return hit

        for S in _stable_subsets(g, boundary[v]):
            Sset = frozenset(S)
            at_v = {g.edges[i].color for i in Sset & c4}
            for c in cand[v]:
                if at_v and at_v != {c}:
                    continue  # infeasible: stays -inf (absent)
                inner3 = sorted(i for i in layout.C3[v] if g.edges[i].color == c)
                top, arg = NEG, None
                for X in _stable_subsets(g, inner2 + inner3, S):
                    passed = Sset | frozenset(X)
                    total = len(X)
                    picks = []
                    for w in ch[v]:
                        key = passed & _bset(layout, w)
                        val, c2 = best_child(w, c, key)
                        if val == NEG:
                            total = NEG
                            break
                        total += val
                        picks.append((w, c2, key))
                    if total > top:
                        top, arg = total, (X, picks)
                if top != NEG:
                    Dv[(c, Sset)] = top
                    Cv[(c, Sset)] = arg
        bound = len(cand[v]) * 2 ** len(boundary[v])
        assert len(Dv) <= bound, "table larger than |C| * 2^(|C1|+|C4|)"
        table_total += len(Dv)
        D[v], choice[v] = Dv, Cv

    root = layout.root
    best_c = max(cand[root], key=lambda c: (D[root].get((c, frozenset()), NEG), -c))
    value = D[root][(best_c, frozenset())]

    F: set[int] = set()
    stack = [(root, best_c, frozenset())]
    while stack:
        v, c, S = stack.pop()
        X, picks = choice[v][(c, S)]
        F.update(X)
        for w, c2, key in picks:
            if c2 == c:
                F.update(tedges[w].get(c, ()))
            stack.append((w, c2, key))
    assert len(F) == value and is_stable(g, F)
    return Solution(int(value), frozenset(F), {"lfe": layout.lfe, "table": table_total})


def _bset(layout: TreeLayout, w: int) -> frozenset[int]:
    return layout.C1[w] | layout.C4[w]


# ------------------------------------------------------------------ forests


def is_forest(g: ColoredHypergraph) -> bool:
    if not g.is_graph:
        return False
    parent = list(range(g.n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in g.edges:
        a, b = (find(v) for v in e.vertices)
        if a == b:
            return False
        parent[a] = b
    return True


def forest_dp(inst: CCInstance | ColoredHypergraph) -> Solution:
    """D[v, c] = best count inside the subtree of v when v takes color c."""
    g = inst.graph if isinstance(inst, CCInstance) else inst
    if not is_forest(g):
        raise PreconditionError("forest solver needs a forest")
    adj: list[list[tuple[int, int]]] = [[] for _ in range(g.n)]
    for i, e in enumerate(g.edges):
        u, w = e.vertices
        adj[u].append((w, i))
        adj[w].append((u, i))
    cand = [_candidate_colors(g, v) for v in range(g.n)]
    D: list[dict[int, int]] = [dict() for _ in range(g.n)]
    pick: list[dict[int, list]] = [dict() for _ in range(g.n)]
    seen = [False] * g.n
    F: set[int] = set()
    total = 0
    for r in range(g.n):
        if seen[r]:
            continue
        order, up = [], {r: (-1, -1)}
        seen[r] = True
        stack = [r]
        while stack:
            v = stack.pop()
            order.append(v)
            for w, i in adj[v]:
                if not seen[w]:
                    seen[w] = True
                    up[w] = (v, i)
                    stack.append(w)
        for v in reversed(order):
            for c in cand[v]:
                val, choice = 0, []
                for w, i in adj[v]:
                    if up.get(w, (None,))[0] != v or up[w][1] != i:
                        continue
                    gain = 1 if g.edges[i].color == c else 0
                    c2 = max(D[w], key=lambda x: (D[w][x] + (gain if x == c else 0), -x))
                    val += D[w][c2] + (gain if c2 == c else 0)
                    choice.append((w, c2, i if gain and c2 == c else None))
                D[v][c], pick[v][c] = val, choice
        c0 = max(D[r], key=lambda x: (D[r][x], -x))
        total += D[r][c0]
        stack2 = [(r, c0)]
        while stack2:
            v, c = stack2.pop()
            for w, c2, i in pick[v][c]:
                if i is not None:
                    F.add(i)
                stack2.append((w, c2))
    assert len(F) == total
    return Solution(total, frozenset(F), {})


# ------------------------------------------------------------------ deletion distance


CLASSES = ("forest", "two-color")


def _class_solver(cls: str):
    if cls == "forest":
        return forest_dp
    if cls == "two-color":
        return solve_two_colors
    raise ValueError(f"unknown class {cls!r}")


def deletion_set(g: ColoredHypergraph, cls: str) -> frozenset[int]:
    """A (not necessarily minimum) edge set whose removal lands g in the class."""
    if cls == "forest":
        _require_simple_graph(g)
        parent = list(range(g.n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        out = set()
        for i, e in enumerate(g.edges):
            a, b = (find(v) for v in e.vertices)
            if a == b:
                out.add(i)
            else:
                parent[a] = b
        return frozenset(out)
    if cls == "two-color":
        freq = Counter(e.color for e in g.edges)
        keep = {c for c, _ in sorted(freq.items(), key=lambda kv: (-kv[1], kv[0]))[:2]}
        return frozenset(i for i, e in enumerate(g.edges) if e.color not in keep)
    raise ValueError(f"unknown class {cls!r}")


def solve_deletion_wrapper(inst: CCInstance | ColoredHypergraph, E_prime: Iterable[int], cls: str) -> Solution:
    """Try every F within E'; clear what conflicts with F; solve the rest in the class."""
    g = inst.graph if isinstance(inst, CCInstance) else inst
    solver = _class_solver(cls)
    Ep = sorted(set(E_prime))
    base = [i for i in range(g.m) if i not in set(Ep)]
    base_g, _ = g.subgraph(base)
    if cls == "forest" and not is_forest(base_g):
        raise PreconditionError("graph minus E' is not a forest")
    if cls == "two-color" and len(base_g.used_colors) > 2:
        raise PreconditionError("graph minus E' uses more than two colors")
    best: Solution | None = None
    tried = 0
    for r in range(len(Ep) + 1):
        for F in itertools.combinations(Ep, r):
            if not is_stable(g, F):
                continue
            tried += 1
            forced: dict[int, int] = {}
            for i in F:
                for v in g.edges[i].vertices:
                    forced[v] = g.edges[i].color
            keep = [
                i
                for i in base
                if all(forced.get(v, g.edges[i].color) == g.edges[i].color for v in g.edges[i].vertices)
            ]
            sub, idx = g.subgraph(keep)
            part = solver(sub)
            size = part.size + len(F)
            if best is None or size > best.size:
                best = Solution(size, frozenset(F) | frozenset(idx[j] for j in part.edges), {})
    assert best is not None
    best.stats["subsets"] = tried
    return best
