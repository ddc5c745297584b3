import json
import subprocess
import sys

import pytest

from derangements.cli import run


def _json(capsys, argv, code=0):
    assert run(argv) == code
    return json.loads(capsys.readouterr().out)


def test_delta_named(capsys):
    out = _json(capsys, ["delta", "--spec", "AGL1-8"])
    assert out["results"]["delta"] == "1/8"
    assert out["results"]["frobenius_order_n(n-1)"] is True
    assert out["pass"] is True


def test_delta_inline_spec(capsys):
    spec = json.dumps({"degree": 4, "generators": ["(0 1 2 3)", "(0 1)"]})
    out = _json(capsys, ["delta", "--spec-json", spec, "--action", "subsets:2"])
    assert out["results"]["delta"] == "7/12"
    out = _json(capsys, ["delta", "--spec-json", spec, "--method", "scan"])
    assert out["results"]["delta"] == "3/8"
    assert out["results"]["total"] == "24"


def test_spec_file(tmp_path, capsys):
    f = tmp_path / "g.json"
    f.write_text(json.dumps({"degree": 5, "generators": [[1, 2, 3, 4, 0]]}))
    assert _json(capsys, ["delta", "--spec-file", str(f)])["results"]["delta"] == "4/5"


def test_coset_commands(capsys):
    out = _json(capsys, ["coset-delta", "--setting", "(S4, A4) natural"])
    assert out["results"]["delta"] == "1/2"
    out = _json(capsys, ["exceptional", "--setting", "(S3, A3) natural"])
    assert out["results"]["exceptional"] is True
    out = _json(capsys, ["hall-build", "--pair", "(C7:C3, C7)"])
    assert out["results"]["coset_delta"] == "0/1"


def test_weyl_and_classical(capsys):
    assert _json(capsys, ["weyl-delta", "--type", "B", "--rank", "3", "--subgroup", "D"])["results"]["mass"] == "1/2"
    assert _json(capsys, ["weyl-delta", "--type", "A", "--rank", "3", "--young", "2,2"])["results"]["limiting_delta"] == "7/12"
    out = _json(capsys, ["class-count", "--family", "GL", "--n", "2", "--q", "3", "--method", "both"])
    assert out["results"]["brute"]["k"] == "8" and out["results"]["genfun"]["k"] == "8"
    assert _json(capsys, ["check-91", "--family", "Sp", "--n", "4", "--q", "3"])["results"]["k"] == "34"
    assert _json(capsys, ["rss", "--family", "GL", "--n", "2", "--q", "7"])["results"]["rss_proportion"] == "41/48"
    assert _json(capsys, ["limit", "--family", "GL", "--q", "3"])["results"]["value"] == "1/1"


def test_failed_criterion_exits_4(capsys):
    out = _json(capsys, ["verify", "bounds"], code=4)
    assert out["results"]["failures"] == "1"


def test_verify_cosets_passes(capsys):
    assert _json(capsys, ["verify", "cosets"])["pass"] is True


def test_invalid_input_exits_2(capsys):
    assert run(["delta", "--spec-json", '{"degree": 3, "generators": [[0, 0, 1]]}']) == 2
    assert run(["delta", "--spec", "Q9-natural"]) == 2
    assert run(["corpus", "nonsense"]) == 2
    with pytest.raises(SystemExit) as exc:
        run(["delta", "--method", "guess", "--spec", "S4-natural"])
    assert exc.value.code == 2


def test_cap_exceeded_exits_3(capsys):
    assert run(["--cap", "100", "class-count", "--family", "GL", "--n", "3", "--q", "2"]) == 3


def test_csv_and_output(tmp_path, capsys):
    target = tmp_path / "out.csv"
    assert run(["delta", "--spec", "S4-natural", "--format", "csv", "--output", str(target)]) == 0
    text = target.read_text()
    assert text.splitlines()[0] == "key,value"
    assert "delta,3/8" in text and text.rstrip().endswith("pass,True")
    assert run(["--format", "csv", "verify", "cosets"]) == 0
    assert capsys.readouterr().out.startswith("instance,criterion,passed,detail")


def test_deterministic_output(capsys):
    argv = ["corpus", "bounds"]
    run(argv)
    first = capsys.readouterr().out
    run(argv)
    assert capsys.readouterr().out == first
    assert "seconds" not in first


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "derangements", "delta", "--spec", "C5-regular"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["results"]["delta"] == "4/5"
