"""Command line entry point.

Exit codes: 0 for YES or pass, 1 for NO or fail, 2 for errors.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

from . import aboveguarantee, bounds, conflict, core, crossval, exactcover, generators, kernel, treedp

ALGOS = ("oracle", "vc", "branch-r", "exactcover", "colorcode", "xp", "secw-dp", "forest", "two-color", "auto")


@dataclass
class RunReport:
    instance: str
    algorithm: str
    answer: str
    optimum: int | None = None
    witness_path: str | None = None
    wall_time: float = 0.0
    stats: dict = field(default_factory=dict)


class CliError(Exception):
    pass


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}") from None


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _induced(g, choice: str):
    if choice == "auto":
        return bounds.induced_matching(g, "exact-small" if g.m <= 40 else "greedy").edges
    return bounds.induced_matching(g, "provided", core.read_solution(_read_text(choice))).edges


def _layout(g, choice: str, seed: int):
    if choice == "auto":
        return treedp.spanning_tree_search(g, seed=seed)
    return treedp.read_layout(_read_text(choice), g)


def _auto(inst: core.CCInstance):
    g = inst.graph
    if treedp.is_forest(g):
        return "forest", treedp.forest_dp(g), {}
    if len(g.used_colors) <= 2:
        return "two-color", conflict.solve_two_colors(g), {}
    kr = kernel.kernelize(inst)
    if kr.decided_yes:
        return "kernel", core.Decision(True, kr.witness), {"kernel": kr.outcome}
    sol = conflict.solve_via_vc(kr.instance)
    lifted = kr.lift(sol.edges)
    return "kernel+vc", core.Decision(sol.size >= inst.k, lifted), {"kernel_edges": kr.instance.graph.m}


def cmd_solve(args) -> int:
    inst = core.read_instance(_read_text(args.instance))
    g, k = inst.graph, inst.k
    core.check(g)
    t0 = time.perf_counter()
    stats: dict = {}
    algo = args.algo
    result: core.Solution | core.Decision
    if algo == "oracle":
        result = core.oracle_max_stable(g)
    elif algo == "vc":
        result = conflict.solve_via_vc(g)
    elif algo == "branch-r":
        result = conflict.branch_unstable_decide(inst)
    elif algo == "exactcover":
        result = exactcover.solve_via_exactcover(inst)
    elif algo == "colorcode":
        cfg = aboveguarantee.ColorCodingConfig(_induced(g, args.induced_matching), args.epsilon, args.seed)
        result = aboveguarantee.solve_color_coding(inst, cfg)
        stats.update(cfg.stats)
    elif algo == "xp":
        result = aboveguarantee.solve_xp(inst, _induced(g, args.induced_matching))
    elif algo == "secw-dp":
        result = treedp.solve_secw_dp(g, _layout(g, args.tree, args.seed))
    elif algo == "forest":
        result = treedp.forest_dp(g)
    elif algo == "two-color":
        result = conflict.solve_two_colors(g)
    else:
        chosen, result, stats = _auto(inst)
        stats["dispatch"] = chosen
    elapsed = time.perf_counter() - t0

    if isinstance(result, core.Solution):
        optimum = result.size
        yes = optimum >= k
        witness = result.edges
        stats.update(result.stats)
    else:
        optimum = None
        yes = result.answer
        witness = result.witness if yes else None
        if result.note:
            stats["note"] = result.note
    if witness is not None and not core.is_stable(g, witness):
        raise AssertionError("solver returned an unstable witness")
    answer = "YES" if yes else ("NO*" if algo == "colorcode" else "NO")
    report = RunReport(args.instance, algo, answer, optimum, None, round(elapsed, 6), stats)
    if args.witness and witness is not None:
        Path(args.witness).write_text(core.write_solution(witness))
        report.witness_path = args.witness
    if args.json:
        print(json.dumps(asdict(report), sort_keys=True, default=str))
    else:
        print(f"ANSWER {answer}")
        if optimum is not None:
            print(f"OPTIMUM {optimum}")
        if "note" in stats:
            print(f"NOTE {stats['note']}")
    return 0 if yes else 1


def cmd_kernel(args) -> int:
    inst = core.read_instance(_read_text(args.instance))
    core.check(inst.graph)
    kr = kernel.kernelize(inst)
    if args.json:
        print(json.dumps({
            "outcome": kr.outcome,
            "log": [str(e) for e in kr.log],
            "witness": sorted(kr.witness) if kr.witness else None,
            "edges": None if kr.instance is None else kr.instance.graph.m,
        }, sort_keys=True))
        return 0
    sys.stdout.write(kr.log_text())
    print(f"OUTCOME {kr.outcome}")
    if kr.instance is not None:
        _emit(core.write_instance(kr.instance), args.out)
    return 0


def cmd_bounds(args) -> int:
    inst = core.read_instance(_read_text(args.instance))
    core.check(inst.graph)
    provided = None
    if args.induced_matching != "auto":
        provided = bounds.induced_matching(
            inst.graph, "provided", core.read_solution(_read_text(args.induced_matching))
        )
    rep = bounds.gap_parameters(inst, provided)
    if args.json:
        print(json.dumps({
            "k": rep.k, "r": rep.r, "matching": rep.matching, "induced_matching": rep.induced_matching,
            "bounds": {name: str(v) for name, v in rep.bounds.items()}, "verdict": rep.verdict,
        }, sort_keys=True))
    else:
        print("\n".join(rep.lines()))
    return 0


def _read_is_graph(text: str) -> tuple[int, list[tuple[int, int]]]:
    n, edges = None, []
    for lineno, raw in enumerate(text.splitlines(), 1):
        tok = raw.split("#", 1)[0].split()
        if not tok:
            continue
        try:
            if tok[0] == "p":
                n = int(tok[2])
            elif tok[0] == "e":
                edges.append((int(tok[1]), int(tok[2])))
            else:
                raise ValueError
        except (ValueError, IndexError):
            raise core.ParseError(lineno, f"cannot parse {raw.strip()!r}") from None
    if n is None:
        raise core.ParseError(1, "missing 'p graph <n> <m>' header")
    return n, edges


def cmd_gen(args) -> int:
    fam = args.family
    if fam == "random":
        inst = generators.gen_random(args.n, args.m, args.colors, args.d, args.seed, args.planted)
    elif fam == "3sat":
        inst = generators.gen_from_3sat(generators.read_dimacs(_read_text(args.source)))
    elif fam == "1in3":
        inst = generators.gen_from_1in3(generators.read_dimacs(_read_text(args.source)))
    elif fam == "mcc":
        inst, _ = generators.gen_from_multicolored_clique(generators.read_mcc(_read_text(args.source)))
    else:
        n, edges = _read_is_graph(_read_text(args.source))
        inst, _ = generators.gen_from_independent_set(n, edges, args.s)
    _emit(core.write_instance(inst), args.out)
    return 0


def cmd_crossvalidate(args) -> int:
    rep = crossval.crossvalidate(args.count, args.seed, args.max_m, dump_dir=args.dump_dir)
    for w in rep.warnings:
        print(f"WARNING {w}")
    for name in sorted(rep.runs):
        print(f"{name} {rep.runs[name]}")
    if rep.passed:
        print(f"PASS {rep.instances} instances")
        return 0
    print(f"FAIL {rep.failure}")
    print(f"REPRODUCER {rep.reproducer}")
    return 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="colclust", description="Colored clustering solvers and generators.")
    sub = p.add_subparsers(dest="cmd", required=True)

    s = sub.add_parser("solve", help="decide or optimize an instance")
    s.add_argument("instance")
    s.add_argument("--algo", choices=ALGOS, default="auto")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--epsilon", type=float, default=0.1)
    s.add_argument("--tree", default="auto", help="layout file or 'auto'")
    s.add_argument("--induced-matching", default="auto", help="solution-format file or 'auto'")
    s.add_argument("--witness", help="write the witness here")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("kernel", help="apply the reduction rules")
    s.add_argument("instance")
    s.add_argument("--out")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_kernel)

    s = sub.add_parser("bounds", help="lower bounds and gap parameters")
    s.add_argument("instance")
    s.add_argument("--induced-matching", default="auto")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_bounds)

    s = sub.add_parser("gen-random", help="random instance")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--colors", type=int, default=3)
    s.add_argument("--d", type=int, default=2)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--planted", type=int)
    s.add_argument("--out")
    s.set_defaults(func=cmd_gen, family="random")

    for fam, what in (("3sat", "DIMACS CNF"), ("1in3", "DIMACS monotone CNF"), ("mcc", "multicolored clique file")):
        s = sub.add_parser(f"gen-{fam}", help=f"reduce from a {what}")
        s.add_argument("source")
        s.add_argument("--out")
        s.set_defaults(func=cmd_gen, family=fam)

    s = sub.add_parser("gen-is", help="reduce from independent set ('p graph n m' + 'e u v', 0-based)")
    s.add_argument("source")
    s.add_argument("--s", type=int, required=True)
    s.add_argument("--out")
    s.set_defaults(func=cmd_gen, family="is")

    s = sub.add_parser("crossvalidate", help="check all exact solvers against each other")
    s.add_argument("--count", type=int, default=200)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--max-m", type=int, default=14)
    s.add_argument("--dump-dir", default=".")
    s.set_defaults(func=cmd_crossvalidate)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (CliError, core.InstanceError, core.PreconditionError, core.SearchSpaceTooLarge, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
