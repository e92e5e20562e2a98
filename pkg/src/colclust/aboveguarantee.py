"""Solvers parameterized by the gap between k and an induced matching M.

Both rely on the exchange bound: a size-k stable set F holding as many
M-edges as possible has at most 2(k - |M|) edges outside M.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .bounds import is_induced_matching
from .core import CCInstance, ColoredHypergraph, Decision, PreconditionError, is_stable


@dataclass
class ColorCodingConfig:
    M: frozenset[int]
    epsilon: float = 0.1
    seed: int = 0
    repetitions: int | None = None  # None derives R from the success bound
    batch: int = 2048
    stats: dict = field(default_factory=dict)


def required_repetitions(num_colors: int, order: int, gap: int, epsilon: float) -> int:
    """ceil(|C|^(2d*gap) * ln(1/eps)); a good coloring appears with prob >= 1 - eps."""
    if gap <= 0:
        return 0
    if not 0 < epsilon < 1:
        raise ValueError("epsilon must lie in (0, 1)")
    return math.ceil(max(num_colors, 1) ** (2 * max(order, 2) * gap) * math.log(1 / epsilon))


def _require_induced(g: ColoredHypergraph, M) -> list[int]:
    M = sorted(M)
    if not is_induced_matching(g, M):
        raise PreconditionError("M is not an induced matching")
    return M


def _neighborhoods(g: ColoredHypergraph, M: list[int]) -> list[list[int]]:
    """delta(e) for each e in M: every edge meeting e, e included."""
    out = []
    for i in M:
        near = set()
        for v in g.edges[i].vertices:
            near.update(g.incidence[v])
        out.append(sorted(near))
    return out


def reconstruct(g: ColoredHypergraph, M, f) -> list[int]:
    """Repair a vertex coloring around M: keep f on e if two edges near e are stable, else paint e."""
    M = _require_induced(g, M)
    f2 = list(f)
    for i, near in zip(M, _neighborhoods(g, M)):
        stable = sum(1 for j in near if all(f[v] == g.edges[j].color for v in g.edges[j].vertices))
        if stable < 2:
            for v in g.edges[i].vertices:
                f2[v] = g.edges[i].color
    return f2


def _stable_matrix(g: ColoredHypergraph, F: np.ndarray) -> np.ndarray:
    """(batch, m) boolean matrix: edge j stable under coloring row b."""
    out = np.ones((F.shape[0], g.m), dtype=bool)
    for j, e in enumerate(g.edges):
        col = out[:, j]
        for v in e.vertices:
            col &= F[:, v] == e.color
    return out


def solve_color_coding(inst: CCInstance, cfg: ColorCodingConfig) -> Decision:
    """One-sided Monte Carlo: YES answers carry a verified witness, NO* may be wrong with prob <= eps."""
    g, k = inst.graph, inst.k
    M = _require_induced(g, cfg.M)
    if k <= len(M):
        return Decision(True, frozenset(M[: max(k, 0)]), "matching suffices")
    if k > g.m:
        return Decision(False, None, "k exceeds m")
    C = max(g.num_colors, 1)
    R = cfg.repetitions
    if R is None:
        R = required_repetitions(C, g.order, k - len(M), cfg.epsilon)
    rng = np.random.default_rng(cfg.seed)
    near = _neighborhoods(g, M)
    m_verts = [list(g.edges[i].vertices) for i in M]
    m_cols = [g.edges[i].color for i in M]
    done = 0
    while done < R:
        B = min(cfg.batch, R - done)
        F = rng.integers(0, C, size=(B, g.n), dtype=np.int64)
        S = _stable_matrix(g, F)
        # M is induced, so repairs around different M-edges never interact
        F2 = F.copy()
        for verts, col, nb in zip(m_verts, m_cols, near):
            weak = S[:, nb].sum(axis=1) < 2
            for v in verts:
                F2[weak, v] = col
        S2 = _stable_matrix(g, F2)
        hits = np.flatnonzero(S2.sum(axis=1) >= k)
        if hits.size:
            b = int(hits[0])
            witness = frozenset(int(j) for j in np.flatnonzero(S2[b]))
            cfg.stats.update(repetitions=done + b + 1, planned=R)
            assert is_stable(g, witness)
            return Decision(True, witness)
        done += B
    cfg.stats.update(repetitions=done, planned=R)
    return Decision(False, None, f"NO* (one-sided, epsilon={cfg.epsilon}, R={R})")


def solve_xp(inst: CCInstance, M) -> Decision:
    """Exact: guess the part F' outside M (at most 2(k-|M|) edges), then add every compatible M-edge."""
    g, k = inst.graph, inst.k
    M = _require_induced(g, M)
    if k <= len(M):
        return Decision(True, frozenset(M[: max(k, 0)]))
    if k > g.m:
        return Decision(False)
    limit = 2 * (k - len(M))
    in_m = set(M)
    rest = [i for i in range(g.m) if i not in in_m]
    owner = {}  # vertex -> M-edge covering it
    for i in M:
        for v in g.edges[i].vertices:
            owner[v] = i

    vcolor: dict[int, int] = {}  # colors forced by the chosen F'
    chosen: list[int] = []

    def extension() -> list[int]:
        ok = []
        for i in M:
            c = g.edges[i].color
            if all(vcolor.get(v, c) == c for v in g.edges[i].vertices):
                ok.append(i)
        return ok

    def dfs(pos: int):
        ext = extension()
        if len(chosen) + len(ext) >= k:
            return frozenset(chosen) | frozenset(ext)
        if len(chosen) == limit:
            return None
        for p in range(pos, len(rest)):
            e = g.edges[rest[p]]
            if any(vcolor.get(v, e.color) != e.color for v in e.vertices):
                continue
            fresh = [v for v in e.vertices if v not in vcolor]
            for v in fresh:
                vcolor[v] = e.color
            chosen.append(rest[p])
            found = dfs(p + 1)
            chosen.pop()
            for v in fresh:
                del vcolor[v]
            if found is not None:
                return found
        return None

    witness = dfs(0)
    if witness is None:
        return Decision(False)
    return Decision(True, witness)


def exchange_optimum(g: ColoredHypergraph, M, k: int, stable_sets) -> frozenset[int] | None:
    """Among the given stable sets of size >= k, trimmed to exactly k, one that holds most of M."""
    M = set(M)
    best = None
    for F in stable_sets:
        if len(F) < k:
            continue
        inside = sorted(set(F) & M)
        outside = sorted(set(F) - M)
        take = inside[:k]
        trimmed = frozenset(take + outside[: k - len(take)])
        if best is None or len(trimmed & M) > len(best & M):
            best = trimmed
    return best
