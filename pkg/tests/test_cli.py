import json

import pytest

from rrgparity.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_count_examples(capsys):
    code, out, _ = run(capsys, "count", "--family", "Bbar", "--k", "2", "--i", "1", "--n-max", "6", "--format", "json")
    assert code == 0
    rows = json.loads(out)["rows"]
    assert rows[2] == {"n": 2, "count": 2}
    code, out, _ = run(capsys, "count", "--family", "U", "--k", "2", "--a", "2", "--n-max", "1", "--format", "csv")
    assert out.splitlines() == ["n,count", "0,1", "1,1"]
    code, out, _ = run(capsys, "count", "--family", "U", "--k", "2", "--a", "2", "--n-max", "0", "--format", "csv",
                       "--method", "enumerate")
    assert out.splitlines() == ["n,count", "0,1"]


def test_count_bad_family(capsys):
    code, _, err = run(capsys, "count", "--family", "Q", "--k", "2", "--a", "1")
    assert code == 2 and "valid ids" in err and "Ubar" in err


def test_count_budget(capsys):
    code, _, err = run(capsys, "count", "--family", "U", "--k", "2", "--a", "2", "--n-max", "40", "--method",
                       "enumerate")
    assert code == 2 and "--allow-large" in err


def test_expand(capsys):
    code, out, _ = run(capsys, "expand", "--side", "product", "--spec", "euler", "--N", "12", "--format", "json")
    assert json.loads(out)["coeffs"] == ["1", "-1", "-1", "0", "0", "1", "0", "1", "0", "0", "0", "0", "-1"]
    code, out, _ = run(capsys, "expand", "--side", "multisum", "--variant", "andrews_gordon", "--k", "2", "--a", "2",
                       "--N", "8", "--format", "json")
    assert json.loads(out)["coeffs"] == [str(c) for c in (1, 1, 1, 1, 2, 2, 3, 3, 4)]
    code, out, _ = run(capsys, "expand", "--side", "product", "--spec", "euler", "--N", "0", "--format", "json")
    assert json.loads(out)["coeffs"] == ["1"]
    code, out, _ = run(capsys, "expand", "--side", "kernel", "--k", "3", "--i", "1", "--N", "6", "--format", "csv")
    assert code == 0 and out.startswith("n,m,coeff\n0,0,1\n")


def test_verify_examples(capsys):
    code, out, _ = run(capsys, "verify", "--id", "thm-3.4", "--k", "2", "--a", "2", "--N", "30", "--format", "json")
    assert code == 0 and json.loads(out)["passed"]
    code, _, err = run(capsys, "verify", "--id", "thm-1.11", "--k", "2", "--a", "1")
    assert code == 2 and "k ≡ a (mod 2)" in err


def test_verify_failure_exit(capsys):
    code, out, _ = run(capsys, "verify", "--id", "thm-1.8/as-printed", "--k", "2", "--a", "1", "--format", "table")
    assert code == 1 and "q^5" in out


def test_verify_deterministic(capsys, tmp_path):
    outs = []
    for jobs in ("1", "3"):
        path = tmp_path / f"v{jobs}.json"
        run(capsys, "verify", "--id", "thm-5.*", "--k-max", "2", "--N", "12", "--jobs", jobs, "--out", str(path),
            "--format", "json")
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]


def test_verify_needs_selector(capsys):
    code, _, err = run(capsys, "verify")
    assert code == 2


def test_bijection(capsys):
    code, out, _ = run(capsys, "bijection", "--k", "2", "--a", "1", "--n-max", "10", "--format", "json")
    rep = json.loads(out)
    assert code == 0 and rep["passed"] and len(rep["rows"]) == 11
    code, out, _ = run(capsys, "bijection", "--k", "2", "--a", "2", "--n-max", "0", "--format", "table")
    assert code == 0 and "PASS" in out


def test_list(capsys):
    code, out, _ = run(capsys, "list", "--format", "csv")
    assert code == 0 and "thm-3.4,q,\"k,a\"" in out
