import json
import subprocess
import sys

import pytest

from cubecx import generators as gen
from cubecx.cli import main
from cubecx.io import canonical_json


@pytest.fixture
def files(tmp_path):
    def write(name, obj):
        p = tmp_path / name
        p.write_text(obj if isinstance(obj, str) else canonical_json(obj))
        return str(p)
    return write


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_validate_q3(capsys, files):
    code, out, _ = run(capsys, "validate", files("q3.json", gen.cube(3)))
    assert code == 0
    rep = json.loads(out)
    assert rep["is_median"] and rep["hyperplane_count"] == 3


def test_validate_triangle_exits_one_with_witness(capsys, files):
    k3 = {"vertices": 3, "edges": [[0, 1], [1, 2], [0, 2]]}
    code, out, _ = run(capsys, "validate", files("k3.json", k3))
    assert code == 1
    assert sorted(json.loads(out)["witness"]) == [0, 1, 2]


def test_usage_errors_exit_two(capsys, files):
    assert run(capsys, "no-such-command")[0] == 2
    assert run(capsys, "validate")[0] == 2
    assert run(capsys, "validate", files("q.json", gen.cube(2)), "--format", "dot")[0] == 2
    assert run(capsys, "validate", "/nonexistent/file.json")[0] == 2
    assert run(capsys, "project", files("p.json", gen.path(3)), "0,x")[0] == 2


def test_malformed_input_exits_one(capsys, files):
    assert run(capsys, "validate", files("bad.json", "{not json"))[0] == 1
    assert run(capsys, "validate", files("bad2.json", {"vertices": 2}))[0] == 1
    assert run(capsys, "dist", files("p.json", gen.path(3)), "0", "7")[0] == 1


def test_generate_is_deterministic(capsys):
    a = run(capsys, "generate", "random-wallspace", "12", "8", "--seed", "42")
    b = run(capsys, "--seed", "42", "generate", "random-wallspace", "12", "8")
    assert a[0] == 0 and a[1] == b[1]
    c = run(capsys, "generate", "random-wallspace", "12", "8", "--seed", "7")
    assert c[1] != a[1]


def test_generate_coset_tree(capsys):
    code, out, _ = run(capsys, "generate", "coset-tree", "3")
    assert code == 0 and json.loads(out)["vertices"] == 15


def test_output_flag(capsys, tmp_path):
    target = tmp_path / "out.json"
    code, out, _ = run(capsys, "generate", "cube", "2", "-o", str(target))
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["vertices"] == 4


def test_dist_and_project(capsys, files):
    grid = files("grid.json", gen.grid(3, 3))
    code, out, _ = run(capsys, "dist", grid, "0", "8")
    assert json.loads(out) == {"l1": 4, "linf": 2, "separators": [0, 1, 2, 3], "x": 0, "y": 8}
    code, out, _ = run(capsys, "project", grid, "0,1,3,4,6,7", "--points", "8")
    assert json.loads(out)["image"] == [7]
    code, out, _ = run(capsys, "project", grid, "0,8")
    assert code == 1 and json.loads(out)["convex"] is False


def test_analyze_q3(capsys, files):
    code, out, _ = run(capsys, "analyze", files("q3.json", gen.cube(3)))
    rep = json.loads(out)
    assert code == 0
    assert len(rep["hyperplanes"]) == 3
    assert rep["contact"]["edges"] == [[0, 1], [0, 2], [1, 2]]
    assert len(rep["decomposition"]["classes"]) == 3
    assert rep["qi"]["clean"]


def test_analyze_p5_with_end_swap(capsys, files):
    action = {"complex": gen.path(5).to_dict(), "automorphisms": [{"map": [4, 3, 2, 1, 0]}]}
    code, out, _ = run(capsys, "analyze", files("a.json", action))
    rep = json.loads(out)["action"]
    assert code == 0
    assert rep["group"]["order"] == 2
    # the middle vertex is fixed, every hyperplane is moved
    assert rep["profile"]["n_hyp"][0] == 1 and rep["profile"]["n_weak"][0] == 2
    assert rep["displacement"]["corrected_holds"]


def test_analyze_invalid_exits_one(capsys, files):
    k3 = {"vertices": 3, "edges": [[0, 1], [1, 2], [0, 2]]}
    code, out, _ = run(capsys, "analyze", files("k3.json", k3))
    assert code == 1 and "witness" in json.loads(out)["validation"]


def test_action_with_window(capsys, files):
    g = gen.path(9)
    action = {"complex": g.to_dict(),
              "automorphisms": [{"domain": list(range(8)), "map": list(range(1, 9))}]}
    code, out, _ = run(capsys, "action", files("w.json", action))
    rep = json.loads(out)
    assert code == 0
    assert rep["windows"][0]["wpd"]["kind"] == "certificate"
    assert rep["windows"][0]["wpd"]["degree"] == 0


def test_dual_decompose_contact_qi_separation(capsys, files):
    ws = {"ground": 4, "walls": [[[0, 1], [2, 3]], [[0, 2], [1, 3]]]}
    code, out, _ = run(capsys, "dual", files("ws.json", ws))
    assert code == 0 and json.loads(out)["complex"]["vertices"] == 4
    grid = files("grid.json", gen.grid(3, 3))
    code, out, _ = run(capsys, "decompose", grid)
    assert len(json.loads(out)["classes"]) == 2
    code, out, _ = run(capsys, "decompose", grid, "--restrict", "0,2")
    assert json.loads(out)["quotient"]["vertices"] == 3
    code, out, _ = run(capsys, "contact", grid)
    assert json.loads(out)["delta_hyperbolicity"] == 0
    assert run(capsys, "qi", grid)[0] == 0
    code, out, _ = run(capsys, "separation", grid)
    assert {r["degree_projection"] for r in json.loads(out) if r["applicable"]} == {2}
    code, out, _ = run(capsys, "hyperplanes", grid)
    assert len(json.loads(out)) == 4


def test_text_format(capsys, files):
    code, out, _ = run(capsys, "validate", files("q3.json", gen.cube(3)), "--format", "text")
    assert code == 0 and "is_median: true" in out


def test_dot_output_is_byte_stable(capsys, files):
    q3 = files("q3.json", gen.cube(3))
    a = run(capsys, "dot", q3)[1]
    b = run(capsys, "dot", q3, "--format", "dot")[1]
    assert a == b and a.count(" -- ") == 12
    assert run(capsys, "dot")[1] == "graph G {\n}\n"
    assert "J0 -- J1" in run(capsys, "dot", q3, "--contact")[1]


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "cubecx", "generate", "path", "3"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout) == {"edges": [[0, 1], [1, 2]], "vertices": 3}


@pytest.mark.slow
def test_suite_command_reports_every_criterion(capsys):
    code, out, err = run(capsys, "suite", "--count", "2")
    rep = json.loads(out)
    assert [c["number"] for c in rep["criteria"]] == ["1", "2", "3", "4", "5", "6", "7", "8",
                                                     "9a", "9b", "9c", "10"]
    failed = [c["number"] for c in rep["criteria"] if not c["passed"]]
    # the every-element linkage form has counterexamples in the action corpus
    assert failed == ["9c"] and code == 1
    assert err.count("criterion") == 12
