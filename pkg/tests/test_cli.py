import io
import json
import subprocess
import sys

import pytest

from orbsplice.cli import run
from orbsplice.graphs import parse_graph
from orbsplice.splice import SpliceEquationSet
from trees import FIXTURES, fixture


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run([str(a) for a in argv], out, err)
    return code, out.getvalue(), err.getvalue()


def fx(name):
    return FIXTURES / f"{name}.graph"


def test_homology_orbifold_d4():
    code, out, _ = call("homology", fx("d4"), "--orbifold")
    assert code == 0
    assert "invariant factors: [2, 4, 4]" in out
    code, out, _ = call("--json", "homology", fx("d4"), "--orbifold")
    obj = json.loads(out)
    assert obj["invariant_factors"] == ["2", "4", "4"]
    assert obj["order"] == "32"
    assert obj["kernel"]["invariant_factors"] == ["2", "2", "2"]
    assert len(obj["generator_images"]) == 4


def test_json_flag_after_subcommand():
    _, a, _ = call("--json", "homology", fx("d4"))
    _, b, _ = call("homology", fx("d4"), "--json")
    assert a == b and json.loads(a)["invariant_factors"] == ["2", "2"]


def test_semigroup_failure_exit_and_location():
    code, out, _ = call("splice", fx("e237_blown"), "--check-semigroup")
    assert code == 1
    assert "semigroup: FAIL" in out
    assert "node c, edge toward n" in out
    code, out, _ = call("--json", "splice", fx("e237_blown"), "--check-semigroup")
    check = json.loads(out)["checks"]["semigroup"]
    assert check["pass"] is False
    assert [(w["node"], w["edge"]) for w in check["witnesses"]] == [("c", "n")]


def test_splice_passes():
    code, out, _ = call("splice", fx("e237"), "--check-semigroup", "--check-congruence")
    assert code == 0
    assert "node n (d_v = 42): a:2, b:3, c:7" in out


def test_equations_star4_substituted():
    code, out, _ = call("equations", fx("star4"), "--substitute")
    assert code == 0
    lines = [l for l in out.splitlines() if not l.startswith("#")]
    assert lines == ["1*z_1^2 + 1*z_3^4 + 1*z_4^5 = 0", "1*z_2^3 + 2*z_3^4 + 4*z_4^5 = 0"]


def test_equations_json_round_trip():
    code, out, _ = call("--json", "equations", fx("d4_pq"), "--cap", 500)
    assert code == 0
    eqs = SpliceEquationSet.from_json(json.loads(out))
    assert len(eqs) == 3
    assert json.loads(json.dumps(eqs.to_json(), sort_keys=True)) == json.loads(out)


def test_equations_refused_when_conditions_fail():
    code, out, _ = call("equations", fx("e237_blown"))
    assert code == 1 and "conditions fail" in out


def test_rep_and_linking_and_validate():
    code, out, _ = call("rep", fx("d4"))
    assert code == 0 and "leaf order: e1 e2 e3" in out
    code, out, _ = call("--json", "rep", fx("d4_pq"), "--orbifold")
    obj = json.loads(out)
    assert obj["leaf_order"] == ["x1", "x2", "x3", "x4", "x5"]
    assert obj["group"]["invariant_factors"] == ["2", "30"]
    code, out, _ = call("--json", "linking", fx("d4"))
    assert json.loads(out)["linking_matrix"][0][1] == "1/2"
    code, out, _ = call("--json", "validate", fx("d4_pq"))
    checks = json.loads(out)["checks"]
    assert code == 0 and all(c["pass"] for c in checks.values())


def test_validate_reports_violation(tmp_path):
    p = tmp_path / "bad.graph"
    p.write_text("vertex a -2\nvertex b -1\nvertex c -2\nedge a b\nedge b c\n")
    code, out, _ = call("validate", p)
    assert code == 1 and "violation: string a-b-c" in out


def test_blowup_and_blowdown():
    code, out, _ = call("blowup", fx("d4"), "--free", "f")
    assert code == 0
    g = parse_graph(out)
    assert g.graph.euler["f"] == -3 and dict(g.weights) == dict(fixture("d4").weights)
    code, out, _ = call("--json", "blowup", fx("d4"), "--edge", "f", "e1")
    obj = json.loads(out)
    assert parse_graph(obj["graph"]).graph.euler["f_b1"] == -1
    code, out, _ = call("blowdown", fx("e237_blown"), "u")
    assert code == 0 and parse_graph(out).graph.euler["c"] == -8


def test_blowup_requires_one_mode():
    code, _, _ = call("blowup", fx("d4"))
    assert code == 2


def test_render():
    code, out, _ = call("render", fx("d4"))
    assert code == 0 and out.startswith('graph "d4"') and out.count("n=2") == 3
    code, out, _ = call("render", fx("e237"), "--splice", "--format", "dot")
    assert 'headlabel="7"' in out


def test_report_and_corpus():
    code, out, _ = call("--json", "report", fx("d4_pq"))
    obj = json.loads(out)
    assert code == 0
    assert obj["invariant_factors"] == ["2", "30"]
    assert obj["leaf_order"] == ["x1", "x2", "x3", "x4", "x5"]
    assert set(obj["checks"]) >= {"semigroup", "congruence", "quasi_minimal", "negative_definite"}
    code, out, _ = call("--json", "corpus", FIXTURES, "--jobs", 3)
    obj = json.loads(out)
    assert code == 1  # the blown-up graph fails the semigroup condition
    assert obj["e237_blown"]["checks"]["semigroup"]["pass"] is False
    assert obj["d4"]["checks"]["semigroup"]["pass"] is True


@pytest.mark.parametrize("argv", [
    ("--json", "report", fx("d4")),
    ("--json", "corpus", FIXTURES),
    ("equations", fx("d4_pq")),
    ("render", fx("d4_pq"), "--splice"),
])
def test_byte_identical_output(argv):
    assert call(*argv) == call(*argv)


def test_input_errors(tmp_path):
    code, _, err = call("homology", tmp_path / "missing.graph")
    assert code == 2 and "cannot read" in err
    bad = tmp_path / "bad.graph"
    bad.write_text("vertex a -2\nedge a b\n")
    code, _, err = call("homology", bad)
    assert code == 2 and "line 2, column 8" in err
    nd = tmp_path / "nd.graph"
    nd.write_text("vertex a 1\n")
    code, _, err = call("homology", nd)
    assert code == 2 and "negative definite" in err
    code, _, _ = call("blowdown", fx("d4"), "f")
    assert code == 2
    code, _, _ = call("splice", tmp_path / "missing.graph")
    assert code == 2
    code, _, _ = call("frobnicate")
    assert code == 2
    code, _, _ = call()
    assert code == 2


def test_no_nodes_is_input_error(tmp_path):
    p = tmp_path / "chain.graph"
    p.write_text("vertex a -2\nvertex b -2\nedge a b\n")
    code, _, err = call("splice", p)
    assert code == 2 and "no vertex of valence" in err


def test_module_entry_point_and_stdin():
    text = fx("d4").read_text()
    proc = subprocess.run([sys.executable, "-m", "orbsplice", "homology", "-", "--orbifold"],
                          input=text, capture_output=True, text=True)
    assert proc.returncode == 0
    assert "[2, 4, 4]" in proc.stdout
    proc = subprocess.run([sys.executable, "-m", "orbsplice", "splice", str(fx("e237_blown")),
                           "--check-semigroup"], capture_output=True, text=True)
    assert proc.returncode == 1
