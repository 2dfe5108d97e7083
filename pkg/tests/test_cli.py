import json

import pytest

from tracepp.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, [json.loads(line) for line in out.splitlines() if line.startswith("{")], err


def test_field_info(capsys):
    code, recs, _ = run(capsys, "field-info", "--field", "m=1,n=3")
    assert code == 0 and recs[0]["modulus"] == "0xb" and recs[0]["abs_S11"] == 4
    code, recs, _ = run(capsys, "field-info", "--field", "m=1,n=2")
    assert recs[0]["modulus"] == "0x7" and "abs_S11" not in recs[0]
    code, _, err = run(capsys, "field-info", "--field", "m=2,n=3,mod=0x42")
    assert code == 2 and "reducible" in err


def test_check(capsys):
    code, recs, _ = run(capsys, "check", "--field", "m=1,n=2", "--L", '[[0,"0x1"]]', "--oracle")
    assert code == 0 and recs[0]["kind"] == "permutation" and recs[0]["oracle"]["agrees"]
    assert recs[-1]["rule"] == "oracle"
    code, recs, _ = run(capsys, "check", "--field", "m=1,n=2", "--A", "0x2", "--L", '[[0,"0x1"]]', "--oracle")
    assert code == 0 and recs[0]["kind"] == "not_injective"
    code, recs, _ = run(capsys, "check", "--field", "m=2,n=3", "--L", '[[1,"0x3a"]]', "--oracle", "--all-rules")
    assert code == 0 and {r.get("kind") for r in recs} == {"permutation"}
    code, _, err = run(capsys, "check", "--field", "m=1,n=2", "--L", "[[0]]")
    assert code == 2


def test_search_and_formats(capsys, tmp_path):
    code, recs, err = run(capsys, "search", "--field", "m=2,n=3", "--shape", "monomial", "--emit-pp-only")
    assert code == 0 and len(recs) == 6 and json.loads(err)["failed"] == 0
    code, _, err = run(capsys, "search", "--field", "m=2,n=4", "--shape", "binomial")
    assert code == 2 and "--trials" in err
    out = tmp_path / "b.csv"
    code, _, _ = run(capsys, "search", "--field", "m=1,n=4", "--shape", "binomial", "--trials", "50",
                     "--format", "csv", "--out", str(out))
    lines = out.read_text().splitlines()
    assert code == 0 and lines[0].startswith("index,shape,params") and len(lines) == 51


@pytest.mark.parametrize("target,trials,count", [("charsum", None, 56), ("adjoint", "50", 50), ("criteria", "50", 50)])
def test_xval(capsys, target, trials, count):
    argv = ["xval", "--field", "m=1,n=3", "--target", target] + (["--trials", trials] if trials else [])
    code, recs, err = run(capsys, *argv)
    assert code == 0 and len(recs) == count and json.loads(err) == {"checked": count, "failed": 0}


def test_xval_charsum_anchor(capsys):
    _, recs, _ = run(capsys, "xval", "--field", "m=1,n=2", "--target", "charsum")
    first = recs[0]
    assert (first["a"], first["b"], first["direct"], first["closed"]) == ("0x1", "0x0", 4, 4)


def test_construct(capsys):
    code, recs, _ = run(capsys, "construct", "--field", "m=1,n=3", "--family", "ell-lambda",
                        "--lambda", '[[1,"0x1"]]', "--ell", '["0x1"]')
    assert code == 0 and recs[0]["emitted"][0]["L"] == [[0, "0x1"], [2, "0x1"]]
    code, recs, _ = run(capsys, "construct", "--field", "m=1,n=4", "--family", "even-lambda",
                        "--lambda", '[[1,"0x1"]]', "--L", '[[0,"0x1"]]')
    assert code == 0 and len(recs[0]["emitted"]) == 3
    code, _, err = run(capsys, "construct", "--field", "m=1,n=2", "--family", "ell-lambda")
    assert code == 2 and "odd n" in err
    for family in ("compose", "affine"):
        code, recs, _ = run(capsys, "construct", "--field", "m=2,n=3", "--family", family, "--trials", "3")
        assert code == 0 and all(r["verdict"]["kind"] == "permutation" for r in recs)


def test_identical_seeds_give_identical_bytes(tmp_path):
    outs = []
    for i in range(2):
        path = tmp_path / f"{i}.jsonl"
        assert main(["xval", "--field", "m=1,n=4", "--target", "criteria", "--trials", "40",
                     "--seed", "9", "--out", str(path)]) == 0
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]


def test_disagreement_sets_exit_status(capsys, monkeypatch):
    from tracepp import criteria as cr

    monkeypatch.setattr(cr, "pp_odd", lambda ctx, L, A=1: cr.Verdict(cr.PERMUTATION, "broken"))
    code, recs, err = run(capsys, "check", "--field", "m=1,n=3", "--L", "[]", "--oracle")
    assert code == 1 and recs[0]["oracle"]["agrees"] is False and json.loads(err)["failed"] == 1
