import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from maptc.cli import run

DATA = Path(__file__).resolve().parent.parent / "data"


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run([str(a) for a in argv], out, err)
    return code, out.getvalue(), err.getvalue()


def test_rank():
    code, out, _ = call("rank", DATA / "rank_2x3.json")
    assert code == 0
    assert out.startswith("rank 2; cat(f)=TC(f)=2")


def test_rank_json_bare_list(tmp_path):
    f = tmp_path / "m.json"
    f.write_text("[[2, 4], [1, 2]]")
    code, out, _ = call("rank", f, "--json")
    assert code == 0
    doc = json.loads(out)
    assert (doc["rank"], doc["cat"], doc["TC"]) == (1, 1, 1)
    assert call("--json", "rank", f)[1] == out


def test_freehom():
    code, out, _ = call("freehom", DATA / "freehom_squares_cubes.json")
    assert code == 0 and out.startswith("image rank 1; cat=1; TC=1")
    code, out, _ = call("freehom", DATA / "freehom_identity_f2.json", "--json")
    doc = json.loads(out)
    assert (doc["image_rank"], doc["cat"], doc["TC"]) == (2, 1, 2)


def test_cuplength():
    code, out, _ = call("cuplength", DATA / "t2.json")
    assert code == 0 and "zero-divisor cup-length 2" in out
    code, out, _ = call("cuplength", DATA / "t2.json", "--map", DATA / "t2_projection_map.json", "--json")
    assert code == 0
    assert json.loads(out) == {"tc_lower_bound": 1, "cat_lower_bound": 1, "field": "Q"}


def test_cuplength_invalid_algebra(tmp_path):
    bad = {
        "field": "Q",
        "basis": [{"name": "1", "degree": 0}, {"name": "a", "degree": 1}, {"name": "b", "degree": 1}, {"name": "ab", "degree": 2}],
        "unit": "1",
        "products": [
            {"left": "a", "right": "b", "result": [{"coeff": 1, "basis": "ab"}]},
            {"left": "b", "right": "a", "result": [{"coeff": 1, "basis": "ab"}]},
        ],
    }
    f = tmp_path / "bad.json"
    f.write_text(json.dumps(bad))
    code, _, err = call("cuplength", f)
    assert code == 1 and "commutativity" in err


def test_bounds_table_and_explain():
    code, out, _ = call("bounds", DATA / "facts_rp3.json")
    assert code == 0
    line = next(l for l in out.splitlines() if l.split()[:2] == ["p", "TC"])
    assert line.split()[-1] == "[1,1]"
    code, out, _ = call("bounds", DATA / "facts_rp3.json", "--explain", "p.TC")
    assert code == 0 and "R3" in out and "R1" in out
    code, out, _ = call("bounds", DATA / "facts_rp3.json", "--json")
    doc = json.loads(out)
    row = next(r for r in doc["intervals"] if (r["entity"], r["quantity"]) == ("h", "halfTC"))
    assert (row["lo"], row["hi"]) == (1, 1)
    assert row["provenance"]["lo"]["premises"]


def test_bounds_contradiction_exit_3():
    code, _, err = call("bounds", DATA / "facts_contradiction.json")
    assert code == 3 and "contradiction" in err
    code, out, _ = call("bounds", DATA / "facts_contradiction.json", "--json")
    assert code == 3 and json.loads(out)["error"] == "contradiction"


def test_bounds_explain_unknown_entity():
    assert call("bounds", DATA / "facts_rp3.json", "--explain", "zz.TC")[0] == 4
    assert call("bounds", DATA / "facts_rp3.json", "--explain", "pTC")[0] == 2


def test_planner_pass_fail_and_csv(tmp_path):
    code, out, _ = call("planner", "sphere-cover", "--n", 2, "--samples", 2000)
    assert code == 0 and out.startswith("PASS")
    csv_path = tmp_path / "p.csv"
    code, out, _ = call("planner", "torus", "--n", 2, "--samples", 500, "--json", "--emit-paths", csv_path)
    doc = json.loads(out)
    assert code == 0 and doc["domains"] == 3 and doc["passed"]
    assert csv_path.read_text().startswith("pair,domain_index,t,c0,c1")


def test_planner_output_byte_identical():
    a = call("planner", "sphere-cover", "--n", 3, "--samples", 1000, "--seed", 4, "--json")[1]
    b = call("planner", "sphere-cover", "--n", 3, "--samples", 1000, "--seed", 4, "--json")[1]
    assert a == b


@pytest.mark.parametrize(
    "argv, code",
    [
        (["planner", "klein"], 4),
        (["planner", "torus", "--n", "0"], 4),
        (["rank", "/nonexistent.json"], 2),
        (["frobnicate"], 2),
        ([], 2),
    ],
)
def test_exit_codes(argv, code):
    assert call(*argv)[0] == code


def test_parse_errors(tmp_path):
    f = tmp_path / "x.json"
    f.write_text("{not json")
    assert call("rank", f)[0] == 2
    f.write_text(json.dumps({"domain_rank": 1, "codomain_rank": 1, "images": [[0]]}))
    assert call("freehom", f)[0] == 2
    f.write_text(json.dumps({"entities": [{"id": "X", "catalog": "K(Z,2)"}]}))
    assert call("bounds", f)[0] == 4


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "maptc", "rank", str(DATA / "rank_2x3.json")], capture_output=True, text=True
    )
    assert proc.returncode == 0 and proc.stdout.startswith("rank 2")
