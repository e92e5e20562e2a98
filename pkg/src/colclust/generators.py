"""Instance generators: hardness reductions as constructive maps, plus random families."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from .core import CCInstance, ColoredHypergraph, Edge, InstanceError, ParseError


class RestrictionError(InstanceError):
    """A source instance violates the restriction a reduction relies on."""


# ------------------------------------------------------------------ CNF


@dataclass(frozen=True)
class CNF:
    """Variables 1..n; literals are signed ints as in DIMACS."""

    n: int
    clauses: tuple[tuple[int, ...], ...]

    def occurrences(self) -> dict[int, list[tuple[int, int]]]:
        """var -> [(clause index, sign)]"""
        occ: dict[int, list[tuple[int, int]]] = {x: [] for x in range(1, self.n + 1)}
        for j, cl in enumerate(self.clauses):
            for lit in cl:
                occ[abs(lit)].append((j, 1 if lit > 0 else -1))
        return occ


def read_dimacs(text: str) -> CNF:
    n = None
    clauses: list[tuple[int, ...]] = []
    pending: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line[0] in "c%":
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise ParseError(lineno, "expected 'p cnf <vars> <clauses>'")
            n = int(parts[2])
            continue
        try:
            nums = [int(t) for t in line.split()]
        except ValueError:
            raise ParseError(lineno, "malformed literal") from None
        for lit in nums:
            if lit == 0:
                clauses.append(tuple(pending))
                pending = []
            else:
                pending.append(lit)
    if pending:
        clauses.append(tuple(pending))
    if n is None:
        n = max((abs(l) for cl in clauses for l in cl), default=0)
    for cl in clauses:
        for lit in cl:
            if not 1 <= abs(lit) <= n:
                raise InstanceError(f"literal {lit} outside 1..{n}")
    return CNF(n, tuple(clauses))


def write_dimacs(phi: CNF) -> str:
    lines = [f"p cnf {phi.n} {len(phi.clauses)}"]
    lines += [" ".join(map(str, (*cl, 0))) for cl in phi.clauses]
    return "\n".join(lines) + "\n"


def satisfiable(phi: CNF) -> bool:
    for bits in itertools.product((False, True), repeat=phi.n):
        if all(any(bits[abs(l) - 1] == (l > 0) for l in cl) for cl in phi.clauses):
            return True
    return False


def one_in_three_satisfiable(phi: CNF) -> bool:
    """Exactly one true literal per clause (literal occurrences counted with multiplicity)."""
    for bits in itertools.product((False, True), repeat=phi.n):
        if all(sum(bits[abs(l) - 1] for l in cl) == 1 for cl in phi.clauses):
            return True
    return False


# ------------------------------------------------------------------ 3-SAT


def check_3sat(phi: CNF) -> None:
    for j, cl in enumerate(phi.clauses):
        if len(cl) > 3:
            raise RestrictionError(f"clause {j} has more than three literals")
        if len({abs(l) for l in cl}) != len(cl):
            raise RestrictionError(f"clause {j} repeats a variable")
    for x, occ in phi.occurrences().items():
        if len(occ) > 3:
            raise RestrictionError(f"variable {x} occurs more than three times")


def normalize_3sat(phi: CNF) -> CNF:
    """Drop clauses holding a variable seen in one polarity only, until none is left.

    Satisfiability is unchanged: such a variable can always be set to satisfy them.
    """
    check_3sat(phi)
    clauses = list(phi.clauses)
    while True:
        signs: dict[int, set[int]] = {}
        for cl in clauses:
            for lit in cl:
                signs.setdefault(abs(lit), set()).add(lit > 0)
        pure = {x for x, s in signs.items() if len(s) == 1}
        if not pure:
            break
        clauses = [cl for cl in clauses if not any(abs(l) in pure for l in cl)]
    used = sorted({abs(l) for cl in clauses for l in cl})
    rename = {x: i + 1 for i, x in enumerate(used)}
    out = tuple(tuple((1 if l > 0 else -1) * rename[abs(l)] for l in cl) for cl in clauses)
    return CNF(len(used), out)


def gen_from_3sat(phi: CNF, normalize: bool = True) -> CCInstance:
    """Degree-3, five-color instance with k = number of clauses.

    Vertices 0..n-1 are variables, n..n+m-1 clauses. Per variable the
    occurrences of each polarity share one color, the two polarities differ,
    and no clause vertex sees a color twice; colors are picked lowest-first
    in variable order.
    """
    if normalize:
        phi = normalize_3sat(phi)
    check_3sat(phi)
    n, m = phi.n, len(phi.clauses)
    occ = phi.occurrences()
    at_clause: list[set[int]] = [set() for _ in range(m)]
    edges: list[Edge] = []
    for x in range(1, n + 1):
        groups = [[j for j, s in occ[x] if s == sign] for sign in (1, -1)]
        if not all(groups):
            raise RestrictionError(f"variable {x} lacks one polarity")
        # larger group first, matching the two-plus-one split
        groups.sort(key=len, reverse=True)
        taken: set[int] = set()
        for grp in groups:
            busy = taken.union(*(at_clause[j] for j in grp))
            c = next(c for c in range(5) if c not in busy)
            taken.add(c)
            for j in grp:
                at_clause[j].add(c)
                edges.append(Edge((x - 1, n + j), c))
    return CCInstance(ColoredHypergraph(n + m, tuple(edges), 5), m)


# ------------------------------------------------------------------ monotone 1-in-3


def check_1in3(phi: CNF) -> None:
    if len(phi.clauses) != phi.n:
        raise RestrictionError("need as many clauses as variables")
    for j, cl in enumerate(phi.clauses):
        if len(cl) != 3 or any(l <= 0 for l in cl):
            raise RestrictionError(f"clause {j} is not three positive literals")
    for x, occ in phi.occurrences().items():
        if len(occ) != 3:
            raise RestrictionError(f"variable {x} does not occur exactly three times")


def gen_from_1in3(phi: CNF) -> CCInstance:
    """Five triangles per variable, each in its own color; k = 7n.

    Layout: clause vertices 0..n-1, then per variable x the block
    u^1..u^3, w^1..w^3. Total 7n vertices and 15n edges.
    """
    check_1in3(phi)
    n = phi.n
    occ = phi.occurrences()
    edges: list[Edge] = []
    color = 0

    def triangle(a, b, c):
        nonlocal color
        edges.extend(Edge(p, color) for p in ((a, b), (b, c), (a, c)))
        color += 1

    for x in range(1, n + 1):
        base = n + 6 * (x - 1)
        u = [base, base + 1, base + 2]
        w = [base + 3, base + 4, base + 5]
        triangle(*u)
        triangle(*w)
        for i, (j, _) in enumerate(occ[x]):
            triangle(j, u[i], w[i])
    return CCInstance(ColoredHypergraph(7 * n, tuple(edges), color), 7 * n)


# ------------------------------------------------------------------ multicolored clique


@dataclass(frozen=True)
class MCCInstance:
    n: int
    edges: tuple[tuple[int, int], ...]
    parts: tuple[tuple[int, ...], ...]

    @property
    def s(self) -> int:
        return len(self.parts)


def read_mcc(text: str) -> MCCInstance:
    n = None
    parts: dict[int, tuple[int, ...]] = {}
    edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        tok = raw.split("#", 1)[0].split()
        if not tok:
            continue
        try:
            if tok[0] == "p":
                if tok[1] != "mcc":
                    raise ValueError
                n = int(tok[2])
            elif tok[0] == "part":
                parts[int(tok[1])] = tuple(int(t) for t in tok[2:])
            elif tok[0] == "e":
                edges.append((int(tok[1]), int(tok[2])))
            else:
                raise ValueError
        except (ValueError, IndexError):
            raise ParseError(lineno, f"cannot parse {raw.strip()!r}") from None
    if n is None:
        raise ParseError(1, "missing 'p mcc' header")
    return MCCInstance(n, tuple(edges), tuple(parts[i] for i in sorted(parts)))


def write_mcc(src: MCCInstance) -> str:
    lines = [f"p mcc {src.n} {len(src.edges)} {src.s}"]
    lines += [f"part {i} " + " ".join(map(str, p)) for i, p in enumerate(src.parts)]
    lines += [f"e {u} {v}" for u, v in src.edges]
    return "\n".join(lines) + "\n"


def has_multicolored_clique(src: MCCInstance) -> bool:
    adj = {frozenset(e) for e in src.edges}
    for pick in itertools.product(*src.parts):
        if all(frozenset(p) in adj for p in itertools.combinations(pick, 2)):
            return True
    return False


@dataclass(frozen=True)
class MCCLayout:
    """Where the pieces of the clique gadget live in the generated instance."""

    matching_color: int
    edge_color: int
    matching_edges: tuple[int, ...]


def gen_from_multicolored_clique(src: MCCInstance) -> tuple[CCInstance, MCCLayout]:
    """Hub u_i per part, a two-edge ladder per (vertex, other part), y_e per edge.

    Colors: 0 on the ladder rungs (an induced matching), 1 on edges at y_e,
    2 + v on the hub edges of vertex v. k = (s-1)(|V| + s).
    """
    s = src.s
    part_of = {}
    for i, p in enumerate(src.parts):
        for v in p:
            if v in part_of:
                raise RestrictionError(f"vertex {v} is in two parts")
            part_of[v] = i
    if set(part_of) != set(range(src.n)):
        raise RestrictionError("parts must cover every vertex exactly once")
    for u, v in src.edges:
        if part_of[u] == part_of[v]:
            raise RestrictionError(f"edge {u}-{v} lies inside part {part_of[u]}")
    CM, CE = 0, 1
    hub = list(range(s))
    nv = s
    w_of: dict[tuple[int, int], int] = {}
    x_of: dict[tuple[int, int], int] = {}
    edges: list[Edge] = []
    rungs: list[int] = []
    for v in range(src.n):
        i = part_of[v]
        for j in range(s):
            if j == i:
                continue
            w_of[v, j], x_of[v, j] = nv, nv + 1
            nv += 2
            edges.append(Edge((hub[i], w_of[v, j]), 2 + v))
            rungs.append(len(edges))
            edges.append(Edge((w_of[v, j], x_of[v, j]), CM))
    for u, v in src.edges:
        y = nv
        nv += 1
        edges.append(Edge((x_of[u, part_of[v]], y), CE))
        edges.append(Edge((x_of[v, part_of[u]], y), CE))
    g = ColoredHypergraph(nv, tuple(edges), src.n + 2)
    k = (s - 1) * (src.n + s)
    return CCInstance(g, k), MCCLayout(CM, CE, tuple(rungs))


# ------------------------------------------------------------------ independent set


@dataclass(frozen=True)
class ISLayout:
    """Book-keeping of the independent-set reduction."""

    subdivided_n: int
    subdivided_edges: tuple[tuple[int, int], ...]
    vertex_of_edge: tuple[int, ...]  # hyperedge index -> vertex of the subdivided graph
    coloring: tuple[int, ...]
    dropped_isolated: int


def max_independent_set_size(n: int, edges) -> int:
    adj = [0] * n
    for u, v in edges:
        adj[u] |= 1 << v
        adj[v] |= 1 << u
    best = 0
    for mask in range(1 << n):
        size = bin(mask).count("1")
        if size <= best:
            continue
        if all(not (adj[v] & mask) for v in range(n) if mask >> v & 1):
            best = size
    return best


def gen_from_independent_set(n: int, edges, s: int) -> tuple[CCInstance, ISLayout]:
    """Subdivide each edge twice, 3-color, and turn every vertex into the hyperedge of its incident edges."""
    edges = [tuple(e) for e in edges]
    deg = [0] * n
    for u, v in edges:
        if u == v:
            raise RestrictionError("self-loop")
        deg[u] += 1
        deg[v] += 1
    if any(d > 3 for d in deg):
        raise RestrictionError("maximum degree exceeds 3")
    if len({frozenset(e) for e in edges}) != len(edges):
        raise RestrictionError("parallel edges")
    N = n + 2 * len(edges)
    sub: list[tuple[int, int]] = []
    color = [-1] * N
    for v in range(n):
        color[v] = 0  # originals are pairwise non-adjacent after subdivision
    for t, (u, v) in enumerate(edges):
        a, b = n + 2 * t, n + 2 * t + 1
        sub += [(u, a), (a, b), (b, v)]
        color[a] = min({0, 1, 2} - {color[u]})
        color[b] = min({0, 1, 2} - {color[a], color[v]})
    for a, b in sub:
        if color[a] == color[b]:
            raise AssertionError("greedy 3-coloring failed")
    inc: list[list[int]] = [[] for _ in range(N)]
    for i, (a, b) in enumerate(sub):
        inc[a].append(i)
        inc[b].append(i)
    hyper: list[Edge] = []
    owner: list[int] = []
    for v in range(N):
        if inc[v]:
            hyper.append(Edge(tuple(inc[v]), color[v]))
            owner.append(v)
    dropped = N - len(owner)
    # isolated vertices sit in every maximum independent set
    k = max(s + len(edges) - dropped, 0)
    g = ColoredHypergraph(len(sub), tuple(hyper), 3)
    return CCInstance(g, k), ISLayout(N, tuple(sub), tuple(owner), tuple(color), dropped)


# ------------------------------------------------------------------ random


def gen_random(
    n: int,
    m: int,
    num_colors: int,
    d: int = 2,
    seed: int = 0,
    planted: int | None = None,
) -> CCInstance:
    """Uniform random edges (sizes 2..d) and colors.

    With ``planted=k`` the first edges are k edges split into vertex-disjoint
    monochromatic groups, so the optimum is at least k; the instance target is k.
    """
    if d < 2 or n < d:
        raise ValueError("need d >= 2 and n >= d")
    if num_colors < 1:
        raise ValueError("need at least one color")
    rng = random.Random(seed)
    edges: list[Edge] = []
    if planted:
        if planted > m:
            raise ValueError("planted solution larger than m")
        verts = list(range(n))
        rng.shuffle(verts)
        left = planted
        while left:
            size = min(left, rng.randint(1, 3))
            pool_size = min(len(verts), rng.randint(d, d + size))
            if pool_size < d:
                raise ValueError("not enough vertices for the planted solution")
            pool, verts = verts[:pool_size], verts[pool_size:]
            c = rng.randrange(num_colors)
            for _ in range(size):
                r = rng.randint(2, d) if d > 2 else 2
                edges.append(Edge(tuple(sorted(rng.sample(pool, min(r, len(pool))))), c))
            left -= size
    while len(edges) < m:
        r = rng.randint(2, d) if d > 2 else 2
        edges.append(Edge(tuple(sorted(rng.sample(range(n), r))), rng.randrange(num_colors)))
    k = planted if planted else 0
    return CCInstance(ColoredHypergraph(n, tuple(edges), num_colors), k)


def gen_planted_hubs(
    n: int, m: int, k: int = 12, hubs: int = 4, per_color: int = 5, seed: int = 0
) -> CCInstance:
    """Stars around a few hubs with many colors each; every matching has at most ``hubs`` edges.

    Each hub also gets ceil(k / hubs) edges of a private color, so the optimum is
    at least k. Shared colors hold ``per_color`` edges spread over the hubs.
    """
    if hubs < 1 or n <= hubs:
        raise ValueError("need at least one hub and one leaf")
    private = -(-k // hubs)
    if m < hubs * private:
        raise ValueError("m too small for the planted solution")
    rng = random.Random(seed)
    shared = m - hubs * private
    num_shared = -(-shared // per_color)
    edges: list[Edge] = []
    for h in range(hubs):
        for leaf in rng.sample(range(hubs, n), private):
            edges.append(Edge((h, leaf), num_shared + h))
    for i in range(shared):
        edges.append(Edge((i % hubs, rng.randrange(hubs, n)), i // per_color))
    return CCInstance(ColoredHypergraph(n, tuple(edges), num_shared + hubs), k)
