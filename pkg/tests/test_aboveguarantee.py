import itertools

import pytest
from hypothesis import given, settings

from colclust.aboveguarantee import (
    ColorCodingConfig,
    exchange_optimum,
    reconstruct,
    required_repetitions,
    solve_color_coding,
    solve_xp,
)
from colclust.bounds import induced_matching
from colclust.core import (
    CCInstance,
    PreconditionError,
    coloring_of,
    is_stable,
    oracle_max_stable,
    stable_under,
)

from conftest import RAINBOW_TRIANGLE, G, hypergraphs


def all_stable_sets(g):
    return [F for r in range(g.m + 1) for F in itertools.combinations(range(g.m), r) if is_stable(g, F)]


def test_reconstruct_paints_matching_edges():
    g = G(4, [((0, 1), 1), ((2, 3), 2)], 3)
    f2 = reconstruct(g, [0, 1], [0, 0, 0, 0])
    assert f2 == [1, 1, 2, 2]
    assert len(stable_under(g, f2)) >= 2


def test_reconstruct_empty_matching_is_identity():
    assert reconstruct(RAINBOW_TRIANGLE, [], [2, 0, 1]) == [2, 0, 1]


def test_reconstruct_requires_induced():
    path = G(4, [((0, 1), 0), ((1, 2), 0), ((2, 3), 0)])
    with pytest.raises(PreconditionError):
        reconstruct(path, [0, 2], [0] * 4)


def test_guards():
    g = G(4, [((0, 1), 1), ((2, 3), 2)], 3)
    d = solve_color_coding(CCInstance(g, 2), ColorCodingConfig(frozenset({0, 1})))
    assert d.answer
    assert solve_xp(CCInstance(g, 2), [0, 1]).answer
    assert not solve_xp(CCInstance(RAINBOW_TRIANGLE, 2), [0]).answer


def test_repetition_count():
    assert required_repetitions(3, 2, 0, 0.1) == 0
    assert required_repetitions(2, 2, 1, 0.5) == 12
    with pytest.raises(ValueError):
        required_repetitions(2, 2, 1, 1.5)


def test_color_coding_one_sided_note():
    cfg = ColorCodingConfig(frozenset({0}), repetitions=5)
    d = solve_color_coding(CCInstance(RAINBOW_TRIANGLE, 2), cfg)
    assert not d.answer and d.note.startswith("NO*")
    assert cfg.stats["repetitions"] == 5


@settings(max_examples=120, deadline=None)
@given(hypergraphs(max_m=12))
def test_xp_matches_oracle(g):
    opt = oracle_max_stable(g, limit=None).size
    M = induced_matching(g, "exact-small").edges
    for k in range(0, g.m + 2):
        d = solve_xp(CCInstance(g, k), M)
        assert d.answer == (opt >= k)
        if d.answer:
            assert is_stable(g, d.witness) and len(d.witness) >= k


@settings(max_examples=80, deadline=None)
@given(hypergraphs(max_m=10, max_colors=3))
def test_reconstruct_keeps_a_good_coloring_good(g):
    M = induced_matching(g, "exact-small").edges
    sets = all_stable_sets(g)
    opt = max(len(F) for F in sets)
    F = exchange_optimum(g, M, opt, sets)
    f2 = reconstruct(g, M, coloring_of(g, F))
    assert len(stable_under(g, f2)) >= len(F)


@settings(max_examples=80, deadline=None)
@given(hypergraphs(max_m=10, max_colors=3))
def test_exchange_bound(g):
    M = induced_matching(g, "exact-small").edges
    sets = all_stable_sets(g)
    opt = max(len(F) for F in sets)
    for k in range(len(M), opt + 1):
        F = exchange_optimum(g, M, k, sets)
        assert len(F) == k and is_stable(g, F)
        assert len(F - M) <= 2 * (k - len(M))


@settings(max_examples=60, deadline=None)
@given(hypergraphs(max_m=9, max_colors=2, max_d=2))
def test_color_coding_never_wrong_on_no(g):
    opt = oracle_max_stable(g, limit=None).size
    M = induced_matching(g, "exact-small").edges
    d = solve_color_coding(CCInstance(g, opt + 1), ColorCodingConfig(M, repetitions=300))
    assert not d.answer
