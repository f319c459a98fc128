from __future__ import annotations

import json
import subprocess
import sys
from pathlib import Path

import pytest

import chowlab
from chowlab.cli import emit, run, to_json
from fractions import Fraction

CORPUS = Path(chowlab.__file__).parent / "corpus"


def corpus_file(name):
    return str(CORPUS / f"{name}.var")


def ok(argv):
    code, out, err = run(argv)
    assert code == 0, err
    return json.loads(out)


def test_serialization_is_exact_and_float_free():
    assert json.loads(emit({"x": Fraction(3, 2)})) == {"x": "3/2"}
    with pytest.raises(TypeError):
        to_json({"x": 0.5})


def test_contact_all_routes():
    rep = ok(["contact", "--input", corpus_file("line"), "--weights", "1,1,0", "--route", "all"])
    assert rep["results"]["e_w"] == {"asymptotic": "1", "brackets": "1", "polytope": "1"}
    assert rep["results"]["cross_check"] == "pass"


def test_contact_with_weight_file(tmp_path):
    wf = tmp_path / "w.txt"
    wf.write_text("weights: 0 1 2\n")
    rep = ok(["contact", "--input", corpus_file("conic"), "--weights-file", str(wf)])
    assert len(set(rep["results"]["e_w"].values())) == 1
    assert any("sorted" in w for w in rep["warnings"])


def test_chowform_both_routes():
    rep = ok(["chowform", "--input", corpus_file("twisted_cubic"), "--chow-route", "both"])
    res = rep["results"]
    assert res["cross_check"] == "pass"
    assert res["elimination"]["form"] == res["parametrization"]["form"]
    assert res["elimination"]["multidegree"] == [3, 3]


def test_polytope_text_output_stars_vertices():
    code, out, _ = run(["polytope", "--input", corpus_file("twisted_cubic"), "--format", "text"])
    assert code == 0
    starred = [l for l in out.splitlines() if l.strip().endswith("*")]
    assert len(starred) >= 4


def test_semistable_and_verify_round_trip(tmp_path):
    code, out, _ = run(["semistable", "--input", corpus_file("point_p2")])
    assert code == 0
    rep = json.loads(out)
    assert rep["results"]["status"] == "UNSTABLE"
    cert = tmp_path / "cert.json"
    cert.write_text(out)
    verified = ok(["verify", "--certificate", str(cert)])
    assert verified["results"]["verified"] is True
    # a certificate claiming the wrong sides is a cross-check failure
    rep["results"]["verdicts"][0]["certificate"]["lhs"] = "0"
    cert.write_text(json.dumps(rep))
    code, _, _ = run(["verify", "--certificate", str(cert)])
    assert code == 4


def test_semistable_scope_warning():
    rep = ok(["semistable", "--input", corpus_file("conic"), "--random", "3", "--seed", "1"])
    assert rep["results"]["status"] == "SEMISTABLE_DIAGONAL"
    assert any("tested bases" in w for w in rep["warnings"])


def test_bounds_and_heights():
    assert ok(["bounds", "k3", "--N", "3", "--r", "1,1,1,0"])["results"]["bound"] == "4"
    rep = ok(["bounds", "contlinind", "--D", "2", "--d", "1", "--r", "2,1,0", "--input", corpus_file("conic2")])
    assert rep["results"]["bound"] == "2" and rep["results"]["hypothesis_verified"] is True
    chain = ok(["heights", "chain", "--d", "1", "--D", "2", "--N", "2", "--eps", "1/10", "--h-over-deg", "0",
                "--degs", "-1/10,-1/10,-1/10"])
    assert chain["results"]["bound"] == "-1/30"
    assert ok(["heights", "notmeet", "--D", "2", "--d", "1", "--degs", "-5,-1,-1/2"])["results"]["bound"] == "-3"
    assert ok(["heights", "k3", "--N", "3", "--degs", "-2,-1,-1,0"])["results"]["bound"] == "-8"
    assert ok(["heights", "nheight", "--h", "6", "--deg-module", "3", "--N", "2", "--d", "1",
               "--D", "2"])["results"]["value"] == "1/2"


def test_sj_bound_with_edata(tmp_path):
    ed = tmp_path / "e.txt"
    ed.write_text("e: 0 1 2\npair: 0 1 1\npair: 1 2 2\n")
    rep = ok(["bounds", "sj", "--r", "3,1,0", "--J", "0,1,2", "--edata", str(ed)])
    assert rep["results"]["bound"] == "9"


def test_exit_codes(tmp_path, monkeypatch):
    bad = tmp_path / "bad.var"
    bad.write_text("ring: P2\nideal: x0^\n")
    code, _, err = run(["chowform", "--input", str(bad)])
    assert code == 2 and "2:" in err
    code, _, _ = run(["chowform", "--input", str(tmp_path / "missing.var")])
    assert code == 2
    monkeypatch.setenv("CHOWLAB_MAX_DEGREE", "3")
    code, _, err = run(["contact", "--input", corpus_file("twisted_cubic"), "--weights", "9,5,2,0",
                        "--route", "asymptotic"])
    assert code == 3 and "ceiling" in err


def test_deterministic_output():
    argv = ["semistable", "--input", corpus_file("conic"), "--random", "2", "--seed", "4"]
    assert run(argv)[1] == run(argv)[1]
    argv = ["polytope", "--input", corpus_file("twisted_cubic"), "--format", "text"]
    assert run(argv)[1] == run(argv)[1]


def test_console_script_entry_point():
    proc = subprocess.run([sys.executable, "-m", "chowlab.cli", "bounds", "k3", "--N", "3", "--r", "1,0,0,0"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["results"]["bound"] == "2"
