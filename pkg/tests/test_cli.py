import csv
import io
import json
import math
import subprocess
import sys

import pytest

from hyperharm.cli import main
from hyperharm.documents import tree_from_doc, tree_to_doc
from hyperharm.trees import enumerate_indices

from oracles import TREES_BY_DIM, label_degeneracy

LEAF2 = '{"leaf2": null}'
LEAF3 = '{"leaf3": null}'
S22 = '{"split": {"left": {"leaf2": null}, "right": {"leaf2": null}}}'
AX3 = '{"axis": {"leaf3": null}}'


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


class TestEval:
    def test_leaf2_constant(self):
        code, text = run("eval", "--tree", LEAF2, "--index", '{"m": 0}', "--point", '{"phi": 1.0}')
        assert code == 0
        assert text == "0.3989422804014327 0.0\n"
        assert float(text.split()[0]) == 1 / math.sqrt(2 * math.pi)

    def test_selection_rule_zero(self):
        code, text = run(
            "eval", "--tree", S22, "--index", '{"J": 3, "left": {"m": 1}, "right": {"m": 1}}',
            "--point", '{"theta": 0.4, "left": {"phi": 0.1}, "right": {"phi": 0.2}}',
        )
        assert code == 0 and text == "0.0 0.0\n"

    def test_mismatched_index(self, capsys):
        code, _ = run("eval", "--tree", S22, "--index", '{"J": 1, "child": {"m": 1}}', "--point", '{"theta": 0.4, "left": {"phi": 0.1}, "right": {"phi": 0.2}}')
        assert code == 2
        assert "root" in capsys.readouterr().err

    def test_bad_leaf_names_path(self, capsys):
        code, _ = run("eval", "--tree", S22, "--index", '{"J": 1, "left": {"m": 1}, "right": {"l": 0, "m": 0}}', "--point", "{}")
        assert code == 2
        assert "root.right" in capsys.readouterr().err

    def test_catalog_list_and_object(self):
        pt = '{"theta": 0.8, "phi": 0.3}'
        a = run("eval", "--catalog", "spherical3", "--index", "[2, 1]", "--point", pt)
        b = run("eval", "--catalog", "spherical3", "--index", '{"J": 2, "m": 1}', "--point", pt)
        assert a == b and a[0] == 0

    def test_files(self, tmp_path):
        (tmp_path / "t.json").write_text(LEAF3)
        (tmp_path / "i.json").write_text('{"l": 0, "m": 0}')
        (tmp_path / "p.json").write_text('{"theta": 1.0, "phi": 2.0}')
        code, text = run("eval", "--tree", str(tmp_path / "t.json"), "--index", str(tmp_path / "i.json"), "--point", str(tmp_path / "p.json"))
        assert code == 0
        assert float(text.split()[0]) == pytest.approx(1 / math.sqrt(4 * math.pi), rel=1e-15)

    @pytest.mark.parametrize(
        "argv",
        [
            ["eval", "--tree", "/nonexistent.json", "--index", "{}", "--point", "{}"],
            ["eval", "--tree", "{oops", "--index", "{}", "--point", "{}"],
            ["eval", "--tree", LEAF2, "--catalog", "spherical3", "--index", "{}", "--point", "{}"],
            ["eval", "--catalog", "nope", "--index", "[0]", "--point", "{}"],
            ["eval", "--catalog", "spherical3", "--index", "[1, 2]", "--point", '{"theta": 1.0, "phi": 2.0}'],
            ["eval", "--tree", LEAF3, "--index", '{"l": 1, "m": 0}', "--point", '{"theta": 4.0, "phi": 2.0}'],
        ],
    )
    def test_input_errors(self, argv):
        assert run(*argv)[0] == 2


class TestTable:
    def test_sphere_two_points(self):
        pts = '[{"theta": 0.5, "phi": 0.1}, {"theta": 2.0, "phi": 4.0}]'
        code, text = run("table", "--tree", LEAF3, "--jmax", "1", "--points", pts)
        assert code == 0
        rows = list(csv.reader(io.StringIO(text)))
        assert rows[0] == ["l", "m", "theta", "phi", "re", "im"]
        assert len(rows) - 1 == 4 * 2

    def test_rank_zero_constant(self):
        pts = '[{"theta": 0.5, "phi": 0.1}, {"theta": 2.0, "phi": 4.0}, {"theta": 3.0, "phi": 6.0}]'
        _, text = run("table", "--tree", LEAF3, "--jmax", "0", "--points", pts)
        rows = list(csv.DictReader(io.StringIO(text)))
        assert len(rows) == 3 and len({r["re"] for r in rows}) == 1

    def test_row_count_from_enumeration(self):
        code, text = run("table", "--tree", S22, "--jmax", "2", "--order", "2")
        tree = tree_from_doc(json.loads(S22))
        n_idx = sum(len(enumerate_indices(tree, J)) for J in range(3))
        assert n_idx == 1 + 4 + 9
        rows = list(csv.DictReader(io.StringIO(text)))
        assert code == 0 and len(rows) == n_idx * (2 * 4 * 4)

    def test_rows_round_trip(self):
        _, text = run("table", "--tree", AX3, "--jmax", "2", "--format", "json", "--points", '[{"theta": 1.0, "child": {"theta": 0.5, "phi": 1.5}}]')
        for rec in json.loads(text):
            assert rec["index"]["J"] <= 2
            assert set(rec["point"]) == {"theta", "child.theta", "child.phi"}

    def test_catalog_table(self):
        code, text = run("table", "--catalog", "hsh4_split", "--jmax", "1", "--points", '[{"theta": 0.4, "left": {"phi": 0.1}, "right": {"phi": 0.2}}]')
        rows = list(csv.reader(io.StringIO(text)))
        assert code == 0 and rows[0][:3] == ["J", "m1", "m2"] and len(rows) == 1 + 5

    def test_needs_grid(self):
        assert run("table", "--tree", LEAF3, "--jmax", "1")[0] == 2
        assert run("table", "--tree", LEAF3, "--order", "2")[0] == 2
        assert run("table", "--tree", LEAF3, "--jmax", "99", "--order", "2")[0] == 2


class TestVerify:
    def test_spherical3_gram(self):
        code, text = run("verify", "--catalog", "spherical3", "gram", "--jmax", "4")
        report = json.loads(text)
        assert code == 0 and report["passed"] and report["tree"] == {"leaf3": None}

    def test_wigner_character(self):
        code, text = run("verify", "--catalog", "wigner4", "--suite", "character", "--jmax", "2")
        report = json.loads(text)
        assert code == 0
        chars = [c for c in report["checks"] if c["name"] == "character"]
        assert chars and all(max(c["parameters"]["deltas"]) <= 1e-10 for c in chars)

    def test_failure_exit_code(self):
        # too few nodes for rank 4: Gram fails, report still emitted
        code, text = run("verify", "--tree", S22, "gram", "--jmax", "4", "--order", "2")
        assert code == 1 and json.loads(text)["passed"] is False

    def test_csv_format(self):
        code, text = run("verify", "--tree", LEAF3, "gram", "--jmax", "2", "--format", "csv", "--order", "8")
        rows = list(csv.reader(io.StringIO(text)))
        assert code == 0 and rows[0] == ["check", "parameters", "measured", "tolerance", "passed"]

    def test_malformed_tree(self):
        assert run("verify", "--tree", '{"split": {"left": {"leaf2": null}}}', "gram")[0] == 2
        assert run("verify", "--tree", LEAF3, "zerovec")[0] == 2

    def test_unknown_suite(self):
        with pytest.raises(SystemExit) as exc:
            run("verify", "--tree", LEAF3, "bogus")
        assert exc.value.code == 2


class TestDegeneracy:
    @pytest.mark.parametrize("tree", TREES_BY_DIM[4], ids=repr)
    def test_four_dimensions(self, tree):
        _, text = run("degeneracy", "--tree", json.dumps(tree_to_doc(tree)), "--jmax", "3")
        assert text == "J,count\n0,1\n1,4\n2,9\n3,16\n"

    def test_sphere(self):
        _, text = run("degeneracy", "--tree", LEAF3, "--jmax", "5", "--format", "json")
        assert json.loads(text)[-1] == {"J": 5, "count": 11}

    def test_equal_dimension_trees_agree(self):
        outs = {run("degeneracy", "--tree", json.dumps(tree_to_doc(t)), "--jmax", "6")[1] for t in TREES_BY_DIM[6]}
        assert len(outs) == 1
        counts = [int(line.split(",")[1]) for line in outs.pop().splitlines()[1:]]
        assert counts == [label_degeneracy(6, J) for J in range(7)]


def test_subprocess_deterministic():
    cmd = [sys.executable, "-m", "hyperharm.cli", "verify", "--tree", AX3, "laplace", "--jmax", "3", "--seed", "7"]
    a = subprocess.run(cmd, capture_output=True, text=True)
    b = subprocess.run(cmd, capture_output=True, text=True)
    assert a.returncode == 0 and a.stdout == b.stdout and a.stdout


def test_console_script_exit_code():
    res = subprocess.run(["hyperharm", "eval", "--tree", LEAF2, "--index", '{"m": 0.5}', "--point", '{"phi": 1.0}'], capture_output=True, text=True)
    assert res.returncode == 2 and res.stderr.startswith("hyperharm: error:")
