"""Pairwise agreement of every applicable exact solver on generated instances."""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

from .aboveguarantee import solve_xp
from .bounds import induced_matching
from .conflict import branch_unstable, solve_two_colors, solve_via_vc
from .core import CCInstance, ColoredHypergraph, is_stable, oracle_max_stable, write_instance
from .exactcover import solve_via_exactcover
from .generators import gen_random
from .treedp import deletion_set, forest_dp, is_forest, solve_deletion_wrapper, solve_secw_dp

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SolverEntry:
    name: str
    applies: Callable[[ColoredHypergraph], bool]
    run: Callable[[ColoredHypergraph], int]  # returns the optimum, after checking any witness


def _checked(sol_fn):
    def run(g: ColoredHypergraph) -> int:
        sol = sol_fn(g)
        if not is_stable(g, sol.edges) or len(sol.edges) != sol.size:
            raise AssertionError("witness does not certify the reported optimum")
        return sol.size
    return run


def _decision_optimum(decide):
    """Recover the optimum from a decision procedure by asking k = 1, 2, ... until NO."""

    def run(g: ColoredHypergraph) -> int:
        k = 0
        while k < g.m:
            d = decide(CCInstance(g, k + 1))
            if not d.answer:
                break
            if d.witness is not None and (not is_stable(g, d.witness) or len(d.witness) < k + 1):
                raise AssertionError("decision witness is not a stable set of size k")
            k += 1
        return k

    return run


def _xp_decide(inst: CCInstance):
    M = induced_matching(inst.graph, "exact-small" if inst.graph.m <= 40 else "greedy").edges
    return solve_xp(inst, M)


def _small_deletion(cls):
    def applies(g):
        if cls == "forest" and not g.is_graph:
            return False
        return len(deletion_set(g, cls)) <= 8
    return applies


def default_registry() -> list[SolverEntry]:
    always = lambda g: True  # noqa: E731
    return [
        SolverEntry("oracle", always, _checked(lambda g: oracle_max_stable(g, limit=None))),
        SolverEntry("vc", always, _checked(solve_via_vc)),
        SolverEntry("branch-r", lambda g: g.m <= 16, _checked(branch_unstable)),
        SolverEntry("exactcover", lambda g: g.m <= 16, _decision_optimum(solve_via_exactcover)),
        SolverEntry("xp", lambda g: g.m <= 16, _decision_optimum(_xp_decide)),
        SolverEntry("secw-dp", lambda g: g.is_graph, _checked(solve_secw_dp)),
        SolverEntry("forest", is_forest, _checked(forest_dp)),
        SolverEntry("two-color", lambda g: len(g.used_colors) <= 2, _checked(solve_two_colors)),
        SolverEntry(
            "wrapper-forest",
            _small_deletion("forest"),
            _checked(lambda g: solve_deletion_wrapper(g, deletion_set(g, "forest"), "forest")),
        ),
        SolverEntry(
            "wrapper-two-color",
            _small_deletion("two-color"),
            _checked(lambda g: solve_deletion_wrapper(g, deletion_set(g, "two-color"), "two-color")),
        ),
    ]


@dataclass
class CrossvalReport:
    instances: int = 0
    runs: dict[str, int] = field(default_factory=dict)
    failure: str | None = None
    reproducer: Path | None = None
    warnings: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.failure is None


def _results(g: ColoredHypergraph, registry: list[SolverEntry]) -> dict[str, int | str]:
    out: dict[str, int | str] = {}
    for entry in registry:
        if not entry.applies(g):
            continue
        try:
            out[entry.name] = entry.run(g)
        except Exception as exc:  # a crash is a discrepancy too
            out[entry.name] = f"error: {type(exc).__name__}: {exc}"
    return out


def _disagrees(g, registry) -> bool:
    return len(set(map(str, _results(g, registry).values()))) > 1


def minimize(g: ColoredHypergraph, registry: list[SolverEntry]) -> ColoredHypergraph:
    """Drop edges one at a time while the solvers still disagree."""
    current = g
    changed = True
    while changed:
        changed = False
        for i in range(current.m):
            trial, _ = current.subgraph(j for j in range(current.m) if j != i)
            if _disagrees(trial, registry):
                current, changed = trial, True
                break
    return current


def random_small_instance(rng: random.Random, max_m: int = 14) -> CCInstance:
    if rng.random() < 0.7:
        n = rng.randint(2, 10)
        d = 2
    else:
        d = rng.randint(2, 3)
        n = rng.randint(d, 9)
    m = rng.randint(0, max_m if d == 2 else min(max_m, 12))
    colors = rng.randint(1, 4)
    return gen_random(n, m, colors, d, seed=rng.randrange(2**32))


def crossvalidate(
    count: int = 200,
    seed: int = 0,
    max_m: int = 14,
    registry: list[SolverEntry] | None = None,
    dump_dir: Path | str = ".",
) -> CrossvalReport:
    registry = registry if registry is not None else default_registry()
    report = CrossvalReport()
    if count <= 0:
        report.warnings.append("no instances requested; nothing was checked")
        log.warning(report.warnings[-1])
        return report
    rng = random.Random(seed)
    for idx in range(count):
        g = random_small_instance(rng, max_m).graph
        res = _results(g, registry)
        report.instances += 1
        for name in res:
            report.runs[name] = report.runs.get(name, 0) + 1
        if len(set(map(str, res.values()))) > 1:
            small = minimize(g, registry)
            path = Path(dump_dir) / f"reproducer-{seed}-{idx}.cc"
            path.write_text(write_instance(CCInstance(small, 0)))
            report.failure = f"instance {idx}: " + ", ".join(f"{k}={v}" for k, v in sorted(res.items()))
            report.reproducer = path
            return report
    return report
