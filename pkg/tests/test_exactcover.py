import random

import pytest
from hypothesis import given, settings

from colclust.core import CCInstance, Decision, is_stable, oracle_max_stable
from colclust.exactcover import (
    WECInstance,
    reduce_to_wec,
    set_count_bound,
    solve_via_exactcover,
    solve_wec,
    solve_wec_bruteforce,
    wec_family_of,
)

from conftest import AAB_TRIANGLE, MONO_TRIANGLE, RAINBOW_TRIANGLE, G, hypergraphs


def test_monochromatic_triangle_is_trivial_yes():
    assert isinstance(reduce_to_wec(CCInstance(MONO_TRIANGLE, 2)), Decision)


def test_two_red_one_blue():
    g = G(6, [((0, 1), 0), ((2, 3), 0), ((4, 5), 1)])
    # three components in total, two in red: red alone hits k=2 components
    assert isinstance(reduce_to_wec(CCInstance(g, 2)), Decision)
    w = reduce_to_wec(CCInstance(g, 3))
    assert isinstance(w, WECInstance)
    assert solve_via_exactcover(CCInstance(g, 3)).answer
    assert oracle_max_stable(g).size == 3


def test_wec_small_cases():
    assert solve_wec(WECInstance(1, ((0,),), (1,), 1, 1))[0]
    overlapping = WECInstance(3, ((0, 1), (1, 2), (0, 2)), (1, 1, 1), 3, 1)
    assert not solve_wec(overlapping)[0]
    assert not solve_wec_bruteforce(overlapping)


def test_triangles():
    d = solve_via_exactcover(CCInstance(AAB_TRIANGLE, 2))
    assert d.answer and is_stable(AAB_TRIANGLE, d.witness)
    assert not solve_via_exactcover(CCInstance(RAINBOW_TRIANGLE, 2)).answer


def test_k_zero():
    assert solve_via_exactcover(CCInstance(RAINBOW_TRIANGLE, 0)).answer


def random_wec(rng):
    U = rng.randint(1, 8)
    sets, weights = [], []
    for _ in range(rng.randint(1, 9)):
        sets.append(tuple(sorted(rng.sample(range(U), rng.randint(1, min(3, U))))))
        weights.append(rng.randint(0, 3))
    return WECInstance(U, tuple(sets), tuple(weights), rng.randint(0, U), rng.randint(0, 6))


def test_wec_matches_bruteforce():
    rng = random.Random(5)
    for _ in range(400):
        w = random_wec(rng)
        ok, chosen = solve_wec(w)
        assert ok == solve_wec_bruteforce(w)
        if ok:
            cover = [x for j in chosen for x in w.sets[j]]
            assert len(cover) == len(set(cover)) == w.s
            assert sum(w.weights[j] for j in chosen) >= w.W


@settings(max_examples=150, deadline=None)
@given(hypergraphs(max_m=12))
def test_exactcover_matches_oracle(g):
    opt = oracle_max_stable(g, limit=None).size
    for k in range(1, min(g.m, 5) + 1):
        d = solve_via_exactcover(CCInstance(g, k))
        assert d.answer == (opt >= k)
        if d.answer:
            assert is_stable(g, d.witness) and len(d.witness) >= k


@settings(max_examples=100, deadline=None)
@given(hypergraphs(max_m=10))
def test_forward_map_and_set_count(g):
    opt = oracle_max_stable(g, limit=None)
    for k in range(1, opt.size + 1):
        inst = CCInstance(g, k)
        red = reduce_to_wec(inst)
        if isinstance(red, Decision):
            continue
        assert len(red.sets) <= set_count_bound(inst)
        fam = wec_family_of(inst, opt.edges)
        cover = [x for j in fam for x in red.sets[j]]
        assert len(cover) == len(set(cover)) == red.s
        assert sum(red.weights[j] for j in fam) >= k
