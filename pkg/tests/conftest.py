from __future__ import annotations

import random

from hypothesis import strategies as st

from colclust.core import CCInstance, ColoredHypergraph
from colclust.generators import gen_random


def G(n, edges, num_colors=None):
    return ColoredHypergraph.from_edges(n, edges, num_colors)


A, B, C = 0, 1, 2
MONO_TRIANGLE = G(3, [((0, 1), A), ((1, 2), A), ((0, 2), A)])
RAINBOW_TRIANGLE = G(3, [((0, 1), A), ((1, 2), B), ((0, 2), C)])
AAB_TRIANGLE = G(3, [((0, 1), A), ((1, 2), A), ((0, 2), B)])


@st.composite
def hypergraphs(draw, max_n=9, max_m=12, max_colors=4, max_d=3):
    d = draw(st.integers(2, max_d))
    n = draw(st.integers(d, max(d, max_n)))
    colors = draw(st.integers(1, max_colors))
    m = draw(st.integers(0, max_m))
    edges = []
    for _ in range(m):
        size = draw(st.integers(1 if max_d > 2 else 2, d))
        verts = draw(st.lists(st.integers(0, n - 1), min_size=size, max_size=size, unique=True))
        edges.append((tuple(verts), draw(st.integers(0, colors - 1))))
    return G(n, edges, colors)


@st.composite
def graphs(draw, max_n=9, max_m=13, max_colors=4):
    return draw(hypergraphs(max_n=max_n, max_m=max_m, max_colors=max_colors, max_d=2))


def random_instances(count, seed, *, max_m=14, hyper=True):
    """Seeded mix of small graphs and hypergraphs with a random target k."""
    rng = random.Random(seed)
    for t in range(count):
        if hyper and rng.random() < 0.3:
            d = rng.randint(2, 3)
            n = rng.randint(d, 9)
            m = rng.randint(0, 12)
        else:
            d, n, m = 2, rng.randint(2, 10), rng.randint(0, max_m)
        g = gen_random(n, m, rng.randint(1, 4), d, seed=rng.randrange(2**32)).graph
        yield CCInstance(g, rng.randint(0, max(1, m // 2 + 2)))


ACCEPTANCE: list[str] = []


def report(criterion: str, ok: bool, detail: str) -> None:
    line = f"criterion {criterion}: {'PASS' if ok else 'FAIL'} ({detail})"
    ACCEPTANCE.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
