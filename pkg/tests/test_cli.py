import csv
import io
import json
import subprocess
import sys

import pytest

from qsu2.cli import k_range, main
from qsu2.qfield import QRat, q_integer, qpow


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_k_range():
    assert k_range("5") == [5]
    assert k_range("1..4") == [1, 2, 3, 4]
    assert k_range("1,3,5..6") == [1, 3, 5, 6]


def test_semifinite_table(capsys):
    code, out, _ = run(capsys, "pair", "--semifinite", "--gen", "T", "--k", "1..4", "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [r["k"] for r in rows] == ["1", "2", "3", "4"]
    for k, r in enumerate(rows, 1):
        assert r["total"] == (-qpow(4) * q_integer(k)).pretty()
    assert rows[1]["total"] == "-q^4 - q^6"


def test_modular_example(capsys):
    code, out, _ = run(capsys, "pair", "--modular", "--gen", "Ttilde", "--k", "3", "--q", "0.5",
                       "--format", "json")
    assert code == 0
    rec = json.loads(out)
    want = 3 * (1 - qpow(2)) * (1 - qpow(6))
    assert QRat.from_record(rec["total"]) == want
    assert rec["numeric_at_q"] == 2.21484375
    assert set(rec["term"]) == {"path", "eta", "kernel"}


def test_haar_text(capsys):
    code, out, _ = run(capsys, "haar", "--element", "B(0,0,0)")
    assert code == 0 and "haar=1 - q^2" in out


def test_json_round_trip(capsys):
    _, out, _ = run(capsys, "residue", "--element", "A(2,2) + 3*B(1,0,1)", "--kind", "HD",
                    "--format", "json", "--show-seq")
    rec = json.loads(out)
    x = QRat.from_record(rec["residue"])
    assert x.canonical_text() == rec["residue"]["text"]
    assert json.dumps(QRat.from_record(rec["residue"]).to_record()) == \
        json.dumps({k: rec["residue"][k] for k in ("num", "den")})
    assert "window" in rec["sequence"]


def test_output_is_byte_stable(capsys):
    argv = ("ktheory", "--gen", "Tt", "--k", "1..5", "--q", "0.3", "--format", "csv")
    _, a, _ = run(capsys, *argv)
    _, b, _ = run(capsys, *argv)
    assert a == b
    header = a.splitlines()[0]
    assert header == "generator,k,class,htilde_value,numeric"


def test_other_commands(capsys):
    assert run(capsys, "mul", "A(1,0)", "adj(A(1,0))")[1].strip().endswith("reduced=A(1,1)")
    code, out, _ = run(capsys, "dixmier", "--element", "pv", "--kind", "Htilde")
    assert code == 0 and "dixmier=1" in out
    code, out, _ = run(capsys, "ktheory", "--relation", "--k", "1..3")
    assert code == 0 and out.count("relation_holds=True") == 3


def test_oracle_report(capsys):
    code, out, _ = run(capsys, "oracle", "--check", "haar", "--element", "A(1,1)")
    assert code == 0
    recs = [json.loads(line) for line in out.splitlines()]
    assert all({"check", "residual", "tolerance", "pass"} <= set(r) for r in recs)


@pytest.mark.parametrize("argv,code,err", [
    (["nosuch"], 2, "cli.usage"),
    (["pair", "--gen", "T"], 2, "cli.usage"),
    (["haar", "--element", "A(1,"], 2, None),
    (["haar", "--element", "one", "--q", "1.5"], 2, "cli.usage"),
    (["residue", "--element", "one", "--kind", "HD", "--q", "0.5"], 0, None),
    (["pair", "--gen", "Ttilde", "--k", "0"], 3, None),
])
def test_exit_codes(capsys, argv, code, err):
    got, _, stderr = run(capsys, *argv)
    assert got == code
    if code:
        rec = json.loads(stderr)
        assert set(rec) == {"error", "message"}
        if err:
            assert rec["error"] == err


def test_error_records_are_module_qualified(capsys):
    code, _, stderr = run(capsys, "haar", "--element", "q/(1-1)")
    assert code == 2 and json.loads(stderr)["error"] == "parse.error"
    code, _, stderr = run(capsys, "pair", "--gen", "T", "--k", "-1")
    assert code == 3 and "." in json.loads(stderr)["error"]


def test_suite_quick_subprocess():
    res = subprocess.run([sys.executable, "-m", "qsu2.cli", "suite", "--quick"],
                         capture_output=True, text=True, timeout=120)
    assert res.returncode == 0, res.stdout + res.stderr
    assert res.stdout.count("[PASS]") == 8
