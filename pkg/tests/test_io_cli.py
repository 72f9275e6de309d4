import json
import subprocess
import sys
from fractions import Fraction

import pytest
from hypothesis import given, settings

from conftest import nil_tuples
from nilinv.cli import run
from nilinv.errors import InputError
from nilinv.exact import E, J2, Matrix, NilTuple
from nilinv.io import dumps_tuple, format_scalar, load_tuple, loads_tuple, tuple_from_document, write_tuple


# -- documents ---------------------------------------------------------------------------

@settings(max_examples=100)
@given(nil_tuples())
def test_roundtrip_random(t):
    assert loads_tuple(dumps_tuple(t)) == t


def test_roundtrip_fractions_and_layout(tmp_path):
    t = NilTuple.of(J2, Matrix([[0, 0, 0], [0, 0, 0], [0, "1/2", 0]]))
    text = dumps_tuple(t)
    assert '"1/2"' in text and len(text.strip().splitlines()) == 4
    p = tmp_path / "t.json"
    write_tuple(p, t)
    assert load_tuple(p) == t
    assert format_scalar(Fraction(-3, 6)) == "-1/2" and format_scalar(Fraction(4)) == 4


@pytest.mark.parametrize("doc,msg", [
    ([], "JSON object"),
    ({"size": 3, "matrices": [], "x": 1}, "unknown keys"),
    ({"size": 4, "matrices": [[[0]]]}, "size"),
    ({"size": True, "matrices": [[[0]]]}, "size"),
    ({"size": 2, "matrices": []}, "nonempty"),
    ({"size": 2, "matrices": [[[0, 1]]]}, r"matrix 1: expected a 2x2"),
    ({"size": 2, "matrices": [[[0, 1.5], [0, 0]]]}, r"matrix 1 entry \(1,2\)"),
    ({"size": 2, "matrices": [[[0, True], [0, 0]]]}, r"entry \(1,2\)"),
    ({"size": 2, "matrices": [[[0, "x"], [0, 0]]]}, "not a rational"),
    ({"size": 2, "matrices": [[[0, 0], [0, 0]], [[1, 0], [0, 0]]]}, r"matrix 2 is not nilpotent: tr = 1"),
])
def test_document_diagnostics(doc, msg):
    with pytest.raises(InputError, match=msg):
        tuple_from_document(doc)


def test_load_errors_name_the_file(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    with pytest.raises(InputError, match="bad.json: not valid JSON"):
        load_tuple(p)
    with pytest.raises(InputError, match="cannot read"):
        load_tuple(tmp_path / "missing.json")


# -- CLI --------------------------------------------------------------------------------

@pytest.fixture
def files(tmp_path):
    paths = {}
    docs = {
        "a": NilTuple.of(J2, E(3, 2)),
        "b": NilTuple.of(J2, E(1, 2)),
        "z": NilTuple.zeros(2),
        "c": NilTuple.of(J2, E(3, 2), Matrix.zero(3)),
        "two": NilTuple.of(E(1, 2, 2), E(2, 1, 2)),
    }
    for k, t in docs.items():
        paths[k] = tmp_path / f"{k}.json"
        write_tuple(paths[k], t)
    paths["bad"] = tmp_path / "bad.json"
    paths["bad"].write_text('{"size": 3, "matrices": [[[1,0,0],[0,0,0],[0,0,0]]]}')
    return paths


def _run(capsys, *argv):
    code = run([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_eval(capsys, files):
    code, out, _ = _run(capsys, "eval", "--set", "S32", "--input", files["a"])
    assert code == 0 and out.splitlines()[0].split() == ["12", "1"]
    code, out, _ = _run(capsys, "eval", "--set", "S2", "--input", files["two"], "--format", "machine")
    doc = json.loads(out)
    assert code == 0 and doc["set"].startswith("S2") and doc["values"] == [["12", "1"]]
    code, _, err = _run(capsys, "eval", "--set", "S2", "--input", files["a"])
    assert code == 2 and "incompatible" in err


def test_eval_zero_tuple(capsys, tmp_path):
    p = tmp_path / "zero.json"
    write_tuple(p, NilTuple.zeros(3))
    code, out, _ = _run(capsys, "eval", "--set", "P33", "--input", p)
    rows = [line.split() for line in out.splitlines()]
    assert code == 0 and len(rows) == 39 and all(v == "0" for _, v in rows)


def test_separate_exit_codes(capsys, files):
    code, out, _ = _run(capsys, "separate", "--set", "S32", files["a"], files["b"])
    assert code == 1 and out.strip() == "12  (1 vs 0)"
    code, out, _ = _run(capsys, "separate", "--set", "S32", files["a"], files["a"])
    assert code == 0 and "not separated" in out
    code, out, _ = _run(capsys, "separate", "--set", "P33", files["c"], files["c"], "--format", "machine")
    assert code == 0 and json.loads(out) == {"separated": False}


def test_input_errors_exit_2(capsys, files):
    code, _, err = _run(capsys, "eval", "--set", "S33", "--input", files["bad"])
    assert code == 2 and "matrix 1 is not nilpotent: tr = 1 != 0" in err
    code, _, err = _run(capsys, "eval", "--set", "S9", "--input", files["a"])
    assert code == 2
    code, _, err = _run(capsys, "eval", "--set", "S33", "--input", files["a"])
    assert code == 2 and "error:" in err
    code, _, _ = _run(capsys, "fuzz", "theorem", "--trials", "0")
    assert code == 2
    code, _, _ = _run(capsys, "fuzz", "theorem", "--family", "Bogus", "--trials", "1")
    assert code == 2
    code, _, _ = _run(capsys, "fuzz", "canon", "--family", "Conjugate", "--trials", "1")
    assert code == 2
    code, _, _ = _run(capsys, "decomp", "--target", "1x")
    assert code == 2
    code, _, _ = _run(capsys, "decomp", "--target", "14")
    assert code == 2
    code, _, _ = _run(capsys, "decomp", "--target", "11223", "--samples", "3")
    assert code == 2
    code, _, _ = _run(capsys)
    assert code == 2


def test_canon_single_and_pair(capsys, files):
    code, out, _ = _run(capsys, "canon", "--input", files["a"], "--format", "machine")
    doc = json.loads(out)
    assert code == 0 and doc["jordan"] == "J2" and doc["kind"] == "W_II"
    code, out, _ = _run(capsys, "canon", "--input", files["a"], "--pair", files["b"])
    assert code == 0 and out.startswith("case a")
    code, out, _ = _run(capsys, "canon", "--input", files["z"], "--pair", files["z"], "--format", "machine")
    assert code == 0 and json.loads(out)["case"] == "degenerate"
    code, _, _ = _run(capsys, "canon", "--input", files["a"], "--pair", files["c"])
    assert code == 2
    code, _, _ = _run(capsys, "canon", "--input", files["two"])
    assert code == 2


def test_decomp(capsys):
    code, out, _ = _run(capsys, "decomp", "--target", "1212", "--with-generators", "--format", "machine")
    doc = json.loads(out)
    assert code == 0 and doc["member"] and doc["seed"] == 1729
    assert dict(zip(doc["candidates"], doc["coefficients"])) == {"tr(12)*tr(12)": "1", "tr(1122)": "-2"}
    code, out, _ = _run(capsys, "decomp", "--target", "112213", "--expect", "nonmember")
    assert code == 0 and "not in span" in out
    code, _, _ = _run(capsys, "decomp", "--target", "112213", "--expect", "member")
    assert code == 1


def test_fuzz_commands(capsys, tmp_path):
    code, out, _ = _run(capsys, "fuzz", "theorem", "--trials", "5", "--family", "Template", "--format", "machine")
    doc = json.loads(out)
    assert code == 0 and doc["checked"] == 35 and doc["violations"] == 0
    code, out, _ = _run(capsys, "fuzz", "canon", "--trials", "20", "--stabilizer", "J1")
    assert code == 0 and out.startswith("J1: 20 trials")


def test_verify_witnesses(capsys):
    code, out, _ = _run(capsys, "verify", "witnesses", "-v")
    assert code == 0 and out.startswith("[PASS] witnesses: 26/26 S33")
    code, out, _ = _run(capsys, "verify", "canon", "--scale", "0.1", "--format", "machine")
    doc = json.loads(out)
    assert code == 0 and doc["checks"][0]["name"] == "canon" and doc["checks"][0]["passed"]


def test_catalog(capsys, tmp_path):
    code, out, _ = _run(capsys, "catalog")
    assert code == 0 and len(json.loads(out)) >= 26
    p = tmp_path / "cat.json"
    code, _, _ = _run(capsys, "catalog", "--output", p)
    assert code == 0 and json.loads(p.read_text()) == json.loads(out)


def test_module_entry_point(files):
    proc = subprocess.run([sys.executable, "-m", "nilinv", "separate", "--set", "S32",
                           str(files["a"]), str(files["b"])], capture_output=True, text=True)
    assert proc.returncode == 1 and proc.stdout.strip() == "12  (1 vs 0)"
