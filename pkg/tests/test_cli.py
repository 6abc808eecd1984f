import json
import subprocess
import sys

import pytest

from securedom.cli import main
from securedom.graph import parse_edge_list, read_comment_directives


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def cb_file(tmp_path, capsys):
    path = tmp_path / "cb.txt"
    assert main(["--seed", "7", "--out", str(path), "gen", "chordal-bisplit", "-p", "l=4", "-p", "x=3"]) == 0
    capsys.readouterr()
    return path


def test_gen_embeds_spec_and_partition(cb_file):
    text = cb_file.read_text()
    d = read_comment_directives(text)
    assert json.loads(d["spec"])["seed"] == 7
    assert set(json.loads(d["partition"])) == {"X", "Y", "Z"}
    assert parse_edge_list(text).n == 8


def test_gen_is_deterministic(capsys):
    _, a, _ = run(capsys, "--seed", "3", "gen", "split", "-p", "k=3", "-p", "i=3")
    _, b, _ = run(capsys, "gen", "split", "-p", "k=3", "-p", "i=3", "--seed", "3")
    assert a == b


def test_recognize(capsys, cb_file):
    code, out, _ = run(capsys, "recognize", str(cb_file))
    doc = json.loads(out)
    assert code == 0 and doc["chordal"] and doc["chordal_bisplit"] is not None


def test_verify_exit_codes(capsys, cb_file):
    code, out, _ = run(capsys, "verify", str(cb_file), "--set", "0,1,2,3,4,5,6,7")
    assert code == 0 and json.loads(out)["secure"]
    code, out, _ = run(capsys, "verify", str(cb_file), "--set", "[3]", "--secure")
    assert code == 2 and not json.loads(out)["secure"]


def test_verify_certificate(tmp_path, capsys):
    f = tmp_path / "k3.txt"
    f.write_text("3 3\n0 1\n1 2\n0 2\n")
    code, out, _ = run(capsys, "verify", str(f), "--set", "1")
    assert code == 0 and json.loads(out)["certificate"] == {"0": 1, "2": 1}


def test_solve_modes(capsys, cb_file):
    code, out, _ = run(capsys, "solve", str(cb_file), "--exact")
    exact = json.loads(out)
    assert code == 0 and exact["verified"]
    code, out, _ = run(capsys, "solve", str(cb_file), "--exact", "--domination")
    assert json.loads(out)["size"] <= exact["size"]
    code, out, _ = run(capsys, "solve", str(cb_file), "--chordal-bisplit", "--certify")
    doc = json.loads(out)
    assert code == 0 and doc["size"] == exact["size"]
    assert {"branch_taken", "cases_detected", "certified"} <= set(doc)


def test_solve_chain(tmp_path, capsys):
    f = tmp_path / "k23.txt"
    assert main(["--out", str(f), "gen", "complete-bipartite", "-p", "p=2", "-p", "q=3"]) == 0
    code, out, _ = run(capsys, "solve", str(f), "--chain", "--certify")
    doc = json.loads(out)
    assert code == 0 and doc["raw_size"] == 4 and doc["size"] == 2


def test_solve_flag_misuse(capsys, cb_file):
    code, _, err = run(capsys, "solve", str(cb_file), "--chain", "--domination")
    assert code == 1 and "--exact" in err


def test_reduce_writes_sidecar(tmp_path, capsys, cb_file):
    out = tmp_path / "t.txt"
    code, _, _ = run(capsys, "reduce", str(cb_file), "--kind", "bisplit-dd", "--out", str(out))
    side = json.loads((tmp_path / "t.txt.json").read_text())
    assert code == 0
    assert side["schema"] == 1 and side["param_map"] == {"a": 1, "b": 2}
    assert {"kind", "provenance", "partition"} <= set(side)
    assert parse_edge_list(out.read_text()).n == 12


def test_reduce_claim_violation_exit_code(tmp_path, capsys):
    src = tmp_path / "k2.txt"
    src.write_text('# partition: {"K": [0, 1], "I": []}\n2 1\n0 1\n')
    code, _, err = run(capsys, "reduce", str(src), "--kind", "split-sdd", "--lift", "backward", "--lift-set", "0,1,4,6")
    assert code == 3
    assert "doubling-backward" in err


def test_reduce_forward_lift(tmp_path, capsys):
    src = tmp_path / "k2.txt"
    src.write_text("2 1\n0 1\n")
    code, _, err = run(
        capsys, "reduce", str(src), "--kind", "split-dd", "--partition", '{"K": [0, 1], "I": []}',
        "--lift", "forward", "--lift-set", "0",
    )
    assert code == 0 and json.loads(err)["lift"]["output"] == [0, 2]


def test_crosscheck_formats(tmp_path, capsys):
    out = tmp_path / "r.csv"
    code, _, err = run(capsys, "crosscheck", "kpq", "--format", "csv", "--out", str(out))
    assert code == 0 and json.loads(err)["misses"] == 0
    assert out.read_text().startswith("instance_id,suite")
    code, out_text, _ = run(capsys, "crosscheck", "chain", "--max-instances", "3")
    assert code == 0 and json.loads(out_text)["summary"]["incomplete"]


def test_crosscheck_reports_misses(capsys):
    code, _, err = run(capsys, "crosscheck", "doubling", "--max-instances", "300")
    assert json.loads(err)["misses"] > 0 and code == 3


@pytest.mark.parametrize(
    "argv",
    [["verify", "/nonexistent", "--set", "0"], ["gen", "split", "-p", "k"], ["bogus"], ["gen", "split", "-p", "k=0"]],
)
def test_input_errors_exit_one(capsys, argv):
    with pytest.raises(SystemExit) as info:
        code = main(argv)
        raise SystemExit(code)
    assert info.value.code == 1


def test_console_entry_point(tmp_path):
    res = subprocess.run([sys.executable, "-m", "securedom.cli", "crosscheck", "kpq"], capture_output=True, text=True)
    assert res.returncode == 0 and json.loads(res.stdout)["schema"] == 1
