import math

from hypothesis import given, settings

from colclust.core import CCInstance, is_stable, oracle_max_stable
from colclust.kernel import (
    _State,
    chromatic_threshold,
    kernelize,
    postcondition_violations,
    rule_chromatic_degree,
    rule_matching,
    rule_meet_in_middle,
    rule_one_color,
)

from conftest import G, hypergraphs, random_instances


def rainbow_star(leaves):
    return G(leaves + 1, [((0, i), i - 1) for i in range(1, leaves + 1)])


def meet_in_middle_case(centers=3, colors=6, leaves=7):
    """Centers with private colors, each color fanning out to private leaves."""
    edges, nxt, col = [], centers, 0
    for h in range(centers):
        for _ in range(colors):
            for _ in range(leaves):
                edges.append(((h, nxt), col))
                nxt += 1
            col += 1
    return G(nxt, edges)


def answer(inst):
    return oracle_max_stable(inst.graph, limit=None).size >= inst.k


def kernel_answer(kr):
    return True if kr.decided_yes else answer(kr.instance)


def test_rule1_examples():
    assert rule_matching(CCInstance(G(2, [((0, 1), 0)]), 1))[0] is not None
    path = G(4, [((0, 1), 0), ((1, 2), 1), ((2, 3), 2)])
    assert rule_matching(CCInstance(path, 3))[0] is None


def test_rule2_examples():
    two_red = G(4, [((0, 1), 0), ((2, 3), 0), ((1, 2), 1)])
    assert rule_one_color(CCInstance(two_red, 2)) == frozenset({0, 1})
    assert rule_one_color(CCInstance(rainbow_star(4), 2)) is None


def test_rule3_deletes_one_rare_edge():
    star = G(5, [((0, 1), 0), ((0, 2), 0), ((0, 3), 1), ((0, 4), 2)])
    reduced = rule_chromatic_degree(CCInstance(star, 1))
    assert reduced.graph.m == 3


def test_rule3_noop_below_threshold():
    assert rule_chromatic_degree(CCInstance(rainbow_star(4), 2)) is None


def test_rule3_fires_inside_kernelize():
    inst = CCInstance(rainbow_star(7), 3)
    kr = kernelize(inst)
    assert not kr.decided_yes
    assert any(e.rule == 3 for e in kr.log)
    assert kr.instance.graph.m == chromatic_threshold(3, 2) - 1
    assert not answer(inst) and not answer(kr.instance)
    assert postcondition_violations(kr.instance) == []


def test_rule4_fires_on_rich_centers():
    inst = CCInstance(meet_in_middle_case(), 9)
    kr = kernelize(inst)
    assert kr.decided_yes and kr.rule == 4
    assert is_stable(inst.graph, kr.witness) and len(kr.witness) == 9
    assert oracle_max_stable(inst.graph, limit=None).size == 21


def test_rule4_k1():
    g = G(5, [((0, 1), 0), ((0, 2), 0), ((0, 3), 1), ((0, 4), 1)])
    S = {0}
    w = rule_meet_in_middle(CCInstance(g, 1), S=S)
    assert w is not None and len(w) == 1


def test_rule4_empty_t():
    g = G(4, [((0, 1), 0), ((1, 2), 1), ((2, 3), 0)])
    assert rule_meet_in_middle(CCInstance(g, 4)) is None


def test_k1_always_decided_or_empty():
    for inst in random_instances(100, 11):
        kr = kernelize(CCInstance(inst.graph, 1))
        assert kr.decided_yes or kr.instance.graph.m == 0


def test_kernel_fixed_point():
    for inst in random_instances(200, 12):
        kr = kernelize(inst)
        if not kr.decided_yes:
            again = kernelize(kr.instance)
            assert not again.decided_yes
            assert [e.rule for e in again.log] == []
            assert again.instance.graph.edges == kr.instance.graph.edges


def test_lift_maps_back():
    inst = CCInstance(rainbow_star(7), 3)
    kr = kernelize(inst)
    lifted = kr.lift(range(kr.instance.graph.m))
    assert all(inst.graph.edges[i].color == kr.instance.graph.edges[j].color for j, i in enumerate(sorted(lifted)))


@settings(max_examples=200, deadline=None)
@given(hypergraphs(max_m=14))
def test_kernel_preserves_answer(g):
    for k in (1, 2, 3, 4, 6):
        inst = CCInstance(g, k)
        kr = kernelize(inst)
        assert kernel_answer(kr) == answer(inst)
        if kr.decided_yes:
            assert is_stable(g, kr.witness) and len(kr.witness) >= k
        elif g.is_graph:
            assert postcondition_violations(kr.instance) == []


def test_rule4_witness_is_valid_whenever_fired():
    for inst in random_instances(300, 13, hyper=False):
        if inst.graph.is_graph and inst.k >= 1:
            st = _State(inst.graph)
            w = rule_meet_in_middle(inst, _st=st)
            if w is not None:
                assert is_stable(inst.graph, w) and len(w) >= inst.k


def test_threshold_uses_order():
    assert chromatic_threshold(3, 2) == 7
    assert chromatic_threshold(3, 3) == 10
    assert math.isclose(chromatic_threshold(1, 1), 3)
