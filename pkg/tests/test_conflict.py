import itertools

import pytest
from hypothesis import given, settings

from colclust.conflict import (
    branch_unstable,
    branch_unstable_decide,
    build_conflict,
    solve_two_colors,
    solve_via_vc,
)
from colclust.core import CCInstance, PreconditionError, is_stable, oracle_max_stable

from conftest import AAB_TRIANGLE, MONO_TRIANGLE, RAINBOW_TRIANGLE, G, graphs, hypergraphs


def test_conflict_graph_examples():
    assert build_conflict(MONO_TRIANGLE).num_edges == 0
    cg = build_conflict(AAB_TRIANGLE)
    assert sorted(cg.edges()) == [(0, 2), (1, 2)]


def test_vc_triangles():
    assert solve_via_vc(RAINBOW_TRIANGLE).size == 1
    assert solve_via_vc(RAINBOW_TRIANGLE).stats["vc"] == 2
    assert solve_via_vc(AAB_TRIANGLE).size == 2


def test_branching_on_conflict_free_instance():
    sol = branch_unstable(MONO_TRIANGLE)
    assert sol.size == 3 and sol.stats["branches"] == 0


def test_branching_rainbow_triangle():
    d = branch_unstable_decide(CCInstance(RAINBOW_TRIANGLE, 1))
    assert d.answer and len(d.witness) >= 1
    assert branch_unstable(RAINBOW_TRIANGLE).stats["r"] == 2


def test_two_colors_alternating_path():
    path = G(5, [((0, 1), 0), ((1, 2), 1), ((2, 3), 0), ((3, 4), 1)])
    assert solve_two_colors(path).size == 2
    assert oracle_max_stable(path).size == 2


def test_two_colors_rejects_three():
    with pytest.raises(PreconditionError):
        solve_two_colors(RAINBOW_TRIANGLE)


@settings(max_examples=60, deadline=None)
@given(hypergraphs(max_m=11))
def test_independence_matches_stability(g):
    cg = build_conflict(g)
    for r in range(g.m + 1):
        for F in itertools.combinations(range(g.m), r):
            assert cg.is_independent(F) == is_stable(g, F)


@settings(max_examples=150, deadline=None)
@given(hypergraphs(max_m=14))
def test_vc_and_branching_match_oracle(g):
    opt = oracle_max_stable(g, limit=None).size
    for sol in (solve_via_vc(g), branch_unstable(g)):
        assert sol.size == opt
        assert is_stable(g, sol.edges) and len(sol.edges) == opt


@settings(max_examples=150, deadline=None)
@given(graphs(max_colors=2, max_m=14))
def test_two_colors_matches_oracle(g):
    sol = solve_two_colors(g)
    assert sol.size == oracle_max_stable(g, limit=None).size
    assert is_stable(g, sol.edges)
