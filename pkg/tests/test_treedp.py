import random

import pytest
from hypothesis import given, settings

from colclust.core import CCInstance, PreconditionError, is_stable, oracle_max_stable
from colclust.generators import gen_random
from colclust.treedp import (
    build_layout,
    deletion_set,
    forest_dp,
    is_forest,
    layout_from_search,
    read_layout,
    solve_deletion_wrapper,
    solve_secw_dp,
    spanning_tree_search,
)

from conftest import AAB_TRIANGLE, G, graphs


def recount_lfe(g, layout):
    """Local feedback edge number straight from the definition."""
    parent = layout.parent
    depth = [0] * g.n
    for v in range(g.n):
        u, d = v, 0
        while parent[u] >= 0:
            u, d = parent[u], d + 1
        depth[v] = d
    load = [0] * g.n
    for e in g.edges:
        a, b = e.vertices
        if parent[a] == b or parent[b] == a:
            continue
        on_path = {a, b}
        while a != b:
            if depth[a] < depth[b]:
                a, b = b, a
            a = parent[a]
            on_path.add(a)
        for v in on_path:
            load[v] += 1
    return max(load, default=0)


def test_tree_has_zero_lfe():
    path = G(4, [((0, 1), 0), ((1, 2), 1), ((2, 3), 0)])
    layout = build_layout(path, [-1, 0, 1, 2], 0)
    assert layout.lfe == 0
    assert solve_secw_dp(path, layout).size == forest_dp(path).size == 2


def test_cycle_has_lfe_one():
    n = 6
    cyc = G(n, [((i, (i + 1) % n), i % 2) for i in range(n)])
    layout = build_layout(cyc, [-1] + list(range(n - 1)), 0)
    assert layout.lfe == 1


def test_triangle_dp():
    layout = build_layout(AAB_TRIANGLE, [-1, 0, 1], 0)
    assert solve_secw_dp(AAB_TRIANGLE, layout).size == 2


def test_forest_examples():
    assert forest_dp(G(2, [((0, 1), 0)])).size == 1
    star = G(4, [((0, 1), 0), ((0, 2), 0), ((0, 3), 1)])
    assert forest_dp(star).size == 2


def test_forest_dp_rejects_cycle():
    with pytest.raises(PreconditionError):
        forest_dp(AAB_TRIANGLE)


def test_layout_text_round_trip():
    g = gen_random(8, 12, 3, seed=3).graph
    layout = layout_from_search(g, "bfs")
    again = read_layout(layout.dumps(), g)
    assert again.parent == layout.parent and again.lfe == layout.lfe


def test_wrapper_empty_deletion_set():
    star = G(4, [((0, 1), 0), ((0, 2), 0), ((0, 3), 1)])
    assert solve_deletion_wrapper(star, [], "forest").size == forest_dp(star).size


def test_wrapper_unicyclic():
    g = G(4, [((0, 1), 0), ((1, 2), 1), ((2, 0), 0), ((2, 3), 1)])
    sol = solve_deletion_wrapper(g, [2], "forest")
    assert sol.stats["subsets"] == 2
    assert sol.size == oracle_max_stable(g).size


def test_wrapper_skips_conflicting_subsets():
    g = G(3, [((0, 1), 0), ((1, 2), 1), ((0, 2), 2)])
    sol = solve_deletion_wrapper(g, deletion_set(g, "two-color"), "two-color")
    assert sol.stats["subsets"] == 2 and sol.size == 1


def test_wrapper_requires_class():
    with pytest.raises(PreconditionError):
        solve_deletion_wrapper(AAB_TRIANGLE, [], "forest")


@settings(max_examples=150, deadline=None)
@given(graphs(max_m=14))
def test_secw_dp_matches_oracle_on_several_layouts(g):
    opt = oracle_max_stable(g, limit=None).size
    layouts = [layout_from_search(g, "bfs"), layout_from_search(g, "dfs", seed=1), spanning_tree_search(g, budget=30)]
    for layout in layouts:
        sol = solve_secw_dp(g, layout)
        assert sol.size == opt and is_stable(g, sol.edges)
        assert sol.stats["lfe"] == layout.lfe


@settings(max_examples=100, deadline=None)
@given(graphs(max_m=14))
def test_lfe_matches_definition(g):
    rng = random.Random(g.m)
    # a connected spanning structure keeps the recount free of virtual links
    if len({v for e in g.edges for v in e.vertices}) < g.n:
        return
    layout = layout_from_search(g, "dfs", seed=rng.randrange(100))
    if any(layout.parent[v] < 0 for v in range(g.n) if v != layout.root):
        return
    assert layout.lfe == recount_lfe(g, layout)


@settings(max_examples=150, deadline=None)
@given(graphs(max_m=10))
def test_forest_and_wrappers_match_oracle(g):
    opt = oracle_max_stable(g, limit=None).size
    if is_forest(g):
        assert forest_dp(g).size == opt
    for cls in ("forest", "two-color"):
        E = deletion_set(g, cls)
        if len(E) <= 6:
            sol = solve_deletion_wrapper(g, E, cls)
            assert sol.size == opt and is_stable(g, sol.edges)
