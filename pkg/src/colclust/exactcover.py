"""Single-exponential solver through Weighted Exact Cover.

Every monochromatic component contributes all of its nonempty vertex subsets,
weighted by the number of edges of that color they induce. Padding singletons
of weight zero let a solution cover exactly ``s`` elements.
"""

from __future__ import annotations

import itertools
import sys
from dataclasses import dataclass
from functools import lru_cache

from .core import CCInstance, ColoredHypergraph, Decision, edge_components


class ComponentTooLarge(AssertionError):
    """A monochromatic component outgrew the bound that the trivial-YES guard enforces."""


@dataclass(frozen=True)
class WECInstance:
    universe: int
    sets: tuple[tuple[int, ...], ...]
    weights: tuple[int, ...]
    s: int
    W: int
    colors: tuple[int | None, ...] = ()  # edge color behind each set, None for padding

    def dumps(self) -> str:
        lines = [f"p wec {self.universe} {len(self.sets)} {self.s} {self.W}"]
        for S, w in zip(self.sets, self.weights):
            lines.append("s " + " ".join(map(str, (w, *S))))
        return "\n".join(lines) + "\n"


def _trivial_yes(g: ColoredHypergraph, k: int):
    """Witness when some color has k components or some component has k edges."""
    by_color: dict[int, list[int]] = {}
    for i, e in enumerate(g.edges):
        by_color.setdefault(e.color, []).append(i)
    for c in sorted(by_color):
        comps = sorted(edge_components(g, by_color[c]), key=min)
        if len(comps) >= k:
            return frozenset(min(comp) for comp in comps[:k]), by_color, None
        for comp in comps:
            if len(comp) >= k:
                return frozenset(sorted(comp)[:k]), by_color, None
    return None, by_color, True


def reduce_to_wec(inst: CCInstance) -> WECInstance | Decision:
    g, k = inst.graph, inst.k
    d = max(g.order, 2)
    witness, by_color, _ = _trivial_yes(g, k)
    if witness is not None:
        return Decision(True, witness, "trivial: many components or a large component")
    s = d * k
    max_comp = d * (k - 1) if d > 2 else k
    sets: list[tuple[int, ...]] = []
    weights: list[int] = []
    colors: list[int | None] = []
    for c in sorted(by_color):
        for comp in sorted(edge_components(g, by_color[c]), key=min):
            verts = sorted({v for i in comp for v in g.edges[i].vertices})
            if len(verts) > max_comp:
                raise ComponentTooLarge(f"color {c} component has {len(verts)} vertices")
            for size in range(1, len(verts) + 1):
                for X in itertools.combinations(verts, size):
                    Xs = set(X)
                    w = sum(1 for i in comp if g.edges[i].vset <= Xs)
                    sets.append(X)
                    weights.append(w)
                    colors.append(c)
    for j in range(s):
        sets.append((g.n + j,))
        weights.append(0)
        colors.append(None)
    return WECInstance(g.n + s, tuple(sets), tuple(weights), s, k, tuple(colors))


def set_count_bound(inst: CCInstance) -> int:
    g, k = inst.graph, inst.k
    d = max(g.order, 2)
    if d == 2:
        return g.num_colors * k * 2**k + 2 * k
    return g.num_colors * k * 2 ** (d * k) + d * k


def solve_wec(w: WECInstance, memo_limit: int = 64) -> tuple[bool, list[int]]:
    """Exact WEC by branching on the lowest undecided element.

    The element is either covered by a set whose smallest element it is, or
    left uncovered for good. States are memoized on the not-yet-decided part
    of the covered mask plus the covered count when the universe is small.
    """
    U = w.universe
    starting: list[list[int]] = [[] for _ in range(U)]
    masks = []
    for j, S in enumerate(w.sets):
        m = 0
        for x in S:
            m |= 1 << x
        masks.append(m)
        starting[min(S)].append(j)
    # heavier sets first finds good incumbents early
    for lst in starting:
        lst.sort(key=lambda j: (-w.weights[j], j))

    NEG = float("-inf")

    def best(i: int, mask: int, covered: int):
        if covered > w.s:
            return NEG, ()
        if i == U:
            return (0, ()) if covered == w.s else (NEG, ())
        if (mask >> i) & 1:
            return rec(i + 1, mask, covered)
        top, pick = rec(i + 1, mask, covered)
        for j in starting[i]:
            if masks[j] & mask:
                continue
            val, rest = rec(i + 1, mask | masks[j], covered + len(w.sets[j]))
            if val + w.weights[j] > top:
                top, pick = val + w.weights[j], (j,) + rest
        return top, pick

    if U <= memo_limit:
        cached = lru_cache(maxsize=None)(lambda i, hi, covered: best(i, hi << i, covered))

        def rec(i, mask, covered):
            return cached(i, mask >> i, covered)
    else:
        rec = best

    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, 4 * U + 1000))
    try:
        value, chosen = rec(0, 0, 0)
    finally:
        sys.setrecursionlimit(old)
    if value == NEG or value < w.W:
        return False, []
    return True, list(chosen)


def solve_wec_bruteforce(w: WECInstance) -> bool:
    n = len(w.sets)
    for r in range(n + 1):
        for fam in itertools.combinations(range(n), r):
            seen: set[int] = set()
            ok = True
            for j in fam:
                if seen & set(w.sets[j]):
                    ok = False
                    break
                seen |= set(w.sets[j])
            if ok and len(seen) == w.s and sum(w.weights[j] for j in fam) >= w.W:
                return True
    return False


def solve_via_exactcover(inst: CCInstance) -> Decision:
    g, k = inst.graph, inst.k
    if k <= 0:
        return Decision(True, frozenset())
    if k > g.m:
        return Decision(False)
    red = reduce_to_wec(inst)
    if isinstance(red, Decision):
        return red
    ok, chosen = solve_wec(red)
    if not ok:
        return Decision(False)
    F: set[int] = set()
    for j in chosen:
        c = red.colors[j]
        if c is None:
            continue
        X = set(red.sets[j])
        F.update(i for i, e in enumerate(g.edges) if e.color == c and e.vset <= X)
    return Decision(True, frozenset(F))


def wec_family_of(inst: CCInstance, F) -> list[int]:
    """Forward map: the WEC subfamily encoding a stable set of exactly k edges."""
    red = reduce_to_wec(inst)
    if isinstance(red, Decision):
        raise ValueError("instance is decided without a WEC instance")
    g = inst.graph
    F = sorted(F)[: inst.k]
    index = {(S, c): j for j, (S, c) in enumerate(zip(red.sets, red.colors))}
    family = []
    covered = 0
    for comp in edge_components(g, F):
        X = tuple(sorted({v for i in comp for v in g.edges[i].vertices}))
        family.append(index[(X, g.edges[comp[0]].color)])
        covered += len(X)
    pads = [j for j, c in enumerate(red.colors) if c is None]
    family.extend(pads[: red.s - covered])
    return family
