import json

import pytest

from colclust.cli import main
from colclust.core import is_stable, oracle_max_stable, read_instance, read_solution
from colclust.crossval import SolverEntry, crossvalidate, default_registry

TRIANGLE_AAB = "p cc 3 3 2 2\ne 0 0 1\ne 0 1 2\ne 1 0 2\n"


@pytest.fixture
def triangle(tmp_path):
    path = tmp_path / "tri.cc"
    path.write_text(TRIANGLE_AAB)
    return path


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    return code, capsys.readouterr()


def test_solve_vc(triangle, capsys, tmp_path):
    wit = tmp_path / "w.sol"
    code, out = run(capsys, "solve", triangle, "--algo", "vc", "--witness", wit)
    assert code == 0
    assert "ANSWER YES" in out.out and "OPTIMUM 2" in out.out
    g = read_instance(TRIANGLE_AAB).graph
    assert is_stable(g, read_solution(wit.read_text()))


def test_auto_agrees_with_vc(triangle, capsys):
    _, a = run(capsys, "solve", triangle, "--algo", "vc")
    _, b = run(capsys, "solve", triangle)
    assert a.out.splitlines()[0] == b.out.splitlines()[0]


@pytest.mark.parametrize("algo", ["oracle", "branch-r", "exactcover", "xp", "secw-dp", "two-color", "colorcode"])
def test_every_algorithm_says_yes(triangle, capsys, algo):
    code, out = run(capsys, "solve", triangle, "--algo", algo)
    assert code == 0 and "ANSWER YES" in out.out


def test_no_exit_code(tmp_path, capsys):
    path = tmp_path / "rainbow.cc"
    path.write_text("p cc 3 3 3 2\ne 0 0 1\ne 1 1 2\ne 2 0 2\n")
    code, out = run(capsys, "solve", path, "--algo", "oracle")
    assert code == 1 and "ANSWER NO" in out.out
    code, out = run(capsys, "solve", path, "--algo", "colorcode")
    assert code == 1 and "ANSWER NO*" in out.out


def test_forest_flag_on_cycle_errors(triangle, capsys):
    code, out = run(capsys, "solve", triangle, "--algo", "forest")
    assert code == 2 and "error" in out.err


def test_parse_error_exit(tmp_path, capsys):
    path = tmp_path / "bad.cc"
    path.write_text("p cc 3 1 2 1\ne x 0 1\n")
    code, out = run(capsys, "solve", path)
    assert code == 2 and "2" in out.err


def test_missing_file(capsys):
    code, out = run(capsys, "solve", "/nonexistent/file.cc")
    assert code == 2


def test_json_report(triangle, capsys):
    code, out = run(capsys, "solve", triangle, "--algo", "vc", "--json")
    rep = json.loads(out.out)
    assert rep["answer"] == "YES" and rep["optimum"] == 2 and rep["algorithm"] == "vc"


def test_kernel_and_bounds(triangle, capsys, tmp_path):
    out_path = tmp_path / "k.cc"
    code, out = run(capsys, "kernel", triangle, "--out", out_path)
    assert code == 0 and "OUTCOME" in out.out
    code, out = run(capsys, "bounds", triangle)
    assert code == 0 and "verdict ?" in out.out and "alpha 1" in out.out


def test_generators_emit_instances(tmp_path, capsys):
    out = tmp_path / "r.cc"
    assert main(["gen-random", "--n", "8", "--m", "10", "--planted", "3", "--seed", "2", "--out", str(out)]) == 0
    inst = read_instance(out.read_text())
    assert inst.k == 3 and oracle_max_stable(inst.graph).size >= 3

    cnf = tmp_path / "f.cnf"
    cnf.write_text("p cnf 3 2\n1 2 3 0\n-1 -2 -3 0\n")
    assert main(["gen-3sat", str(cnf), "--out", str(tmp_path / "s.cc")]) == 0
    assert read_instance((tmp_path / "s.cc").read_text()).k == 2

    mono = tmp_path / "m.cnf"
    mono.write_text("p cnf 1 1\n1 1 1 0\n")
    assert main(["gen-1in3", str(mono), "--out", str(tmp_path / "o.cc")]) == 0
    assert read_instance((tmp_path / "o.cc").read_text()).k == 7

    mcc = tmp_path / "g.mcc"
    mcc.write_text("p mcc 2 1 2\npart 0 0\npart 1 1\ne 0 1\n")
    assert main(["gen-mcc", str(mcc), "--out", str(tmp_path / "c.cc")]) == 0
    assert read_instance((tmp_path / "c.cc").read_text()).k == 4

    graph = tmp_path / "g.txt"
    graph.write_text("p graph 2 1\ne 0 1\n")
    assert main(["gen-is", str(graph), "--s", "1", "--out", str(tmp_path / "i.cc")]) == 0
    assert read_instance((tmp_path / "i.cc").read_text()).k == 2


def test_crossvalidate_passes(tmp_path, capsys):
    code, out = run(capsys, "crossvalidate", "--count", "40", "--dump-dir", tmp_path)
    assert code == 0 and "PASS 40 instances" in out.out


def test_crossvalidate_zero_warns(capsys, tmp_path):
    code, out = run(capsys, "crossvalidate", "--count", "0", "--dump-dir", tmp_path)
    assert code == 0 and "WARNING" in out.out


def test_crossvalidate_catches_injected_bug(tmp_path):
    reg = default_registry()[:2] + [SolverEntry("off-by-one", lambda g: g.m >= 3, lambda g: g.m)]
    rep = crossvalidate(30, seed=1, registry=reg, dump_dir=tmp_path)
    assert not rep.passed
    small = read_instance(rep.reproducer.read_text()).graph
    assert small.m >= 3
    assert oracle_max_stable(small).size != small.m
