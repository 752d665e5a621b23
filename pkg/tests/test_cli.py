import json
import subprocess
import sys

from rzcert.cli import main
from rzcert.polyio import poly_to_json


def run_cli(args, stdin=None):
    proc = subprocess.run([sys.executable, "-m", "rzcert.cli", *args],
                          input=stdin, capture_output=True, text=True,
                          timeout=120)
    return proc


def _circle_file(tmp_path):
    path = tmp_path / "circle.json"
    code = main(["corpus", "emit", "circle", "--out", str(path)])
    assert code == 0
    return str(path)


def test_rz_check_pass(tmp_path):
    poly = _circle_file(tmp_path)
    proc = run_cli(["rz-check", "--poly", poly, "--lines", "100", "--seed", "7"])
    assert proc.returncode == 0
    report = json.loads(proc.stdout)
    assert report["verdict"] == "rz-confirmed-sampled"
    assert report["config"]["seed"] == 7


def test_rz_check_fail_with_witness(tmp_path):
    path = tmp_path / "tv.json"
    main(["corpus", "emit", "tv_screen", "--out", str(path)])
    proc = run_cli(["rz-check", "--poly", str(path), "--seed", "1"])
    assert proc.returncode == 1
    report = json.loads(proc.stdout)
    assert report["status"] == "fail"
    assert "witness" in report


def test_rz_check_inconclusive(tmp_path):
    # (1 - x1^2 - x2^2)^2 + 1e-13: restricted roots acquire imaginary parts
    # inside the unsure band
    from rzcert.poly import Polynomial
    base = Polynomial(2, {(0, 0): 1, (2, 0): -1, (0, 2): -1}).to_float()
    p = base * base + Polynomial.constant(1e-13, 2, "float")
    path = tmp_path / "near.json"
    path.write_text(poly_to_json(p))
    proc = run_cli(["rz-check", "--poly", str(path), "--lines", "20",
                    "--seed", "2"])
    assert proc.returncode == 2
    assert json.loads(proc.stdout)["status"] == "inconclusive"


def test_malformed_input_exit_3(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"vars": 2, "terms": [')
    proc = run_cli(["rz-check", "--poly", str(bad)])
    assert proc.returncode == 3
    assert "line" in proc.stderr


def test_unknown_subcommand_exit_3():
    proc = run_cli(["frobnicate"])
    assert proc.returncode == 3


def test_determinism_identical_bytes(tmp_path):
    poly = _circle_file(tmp_path)
    args = ["rz-check", "--poly", poly, "--lines", "60", "--seed", "42",
            "--threads", "2"]
    out1 = run_cli(args).stdout
    out2 = run_cli(args).stdout
    assert out1 == out2


def test_pipeline_chain():
    emit = run_cli(["corpus", "emit", "circle"])
    assert emit.returncode == 0
    cons = run_cli(["construct"], stdin=emit.stdout)
    assert cons.returncode == 0
    ver = run_cli(["verify"], stdin=cons.stdout)
    assert ver.returncode == 0
    report = json.loads(ver.stdout)
    assert report["status"] == "pass"
    assert report["h"]["terms"][0]["re"] == "1"


def test_construct_emits_pencil_with_identity_a0(tmp_path):
    poly = _circle_file(tmp_path)
    proc = run_cli(["construct", "--poly", poly, "--seed", "3"])
    assert proc.returncode == 0
    report = json.loads(proc.stdout)
    a0 = report["pencil"]["matrices"][0]["re"]
    assert a0 == [["1", "0"], ["0", "1"]]


def test_verify_sign_flipped_fails(tmp_path):
    poly = _circle_file(tmp_path)
    pencil = {
        "d": 2, "n": 2, "class": "real-symmetric", "mode": "rational",
        "matrices": [
            {"re": [["-1", "0"], ["0", "-1"]], "im": [["0", "0"], ["0", "0"]]},
            {"re": [["-1", "0"], ["0", "1"]], "im": [["0", "0"], ["0", "0"]]},
            {"re": [["0", "-1"], ["-1", "0"]], "im": [["0", "0"], ["0", "0"]]},
        ],
    }
    ppath = tmp_path / "flipped.json"
    ppath.write_text(json.dumps(pencil))
    proc = run_cli(["verify", "--pencil", str(ppath), "--poly", poly])
    assert proc.returncode == 1
    report = json.loads(proc.stdout)
    assert report["report"]["witness"]["stage"] == "basepoint"


def test_renegar_and_member(tmp_path):
    poly = _circle_file(tmp_path)
    proc = run_cli(["renegar", "--poly", poly, "--k", "1"])
    assert proc.returncode == 0
    body = json.loads(proc.stdout)
    assert body["poly"]["terms"] == [{"exp": [0, 0], "im": "0", "re": "2"}]
    assert run_cli(["member", "--poly", poly, "--x", "0.5,0"]).returncode == 0
    assert run_cli(["member", "--poly", poly, "--x", "2,0"]).returncode == 1


def test_corpus_list():
    proc = run_cli(["corpus", "list"])
    assert proc.returncode == 0
    assert "circle" in json.loads(proc.stdout)["instances"]


def test_interlace_subcommand(tmp_path):
    poly = _circle_file(tmp_path)
    qpath = tmp_path / "q.json"
    ren = run_cli(["renegar", "--poly", poly, "--k", "1"])
    qpath.write_text(json.dumps(json.loads(ren.stdout)["poly"]))
    proc = run_cli(["interlace", "--poly", poly, "--q-poly", str(qpath),
                    "--lines", "30", "--samples", "30"])
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["verdicts_agree"] is True


def test_realify_subcommand(tmp_path):
    poly = _circle_file(tmp_path)
    cons = run_cli(["construct", "--poly", poly])
    pencil = json.loads(cons.stdout)["pencil"]
    ppath = tmp_path / "p.json"
    ppath.write_text(json.dumps(pencil))
    proc = run_cli(["realify", "--pencil", str(ppath)])
    assert proc.returncode == 0
    out = json.loads(proc.stdout)["pencil"]
    assert out["n"] == 4 and out["class"] == "real-symmetric"


def test_cross_check_subcommand(tmp_path):
    poly = _circle_file(tmp_path)
    cons = run_cli(["construct", "--poly", poly])
    proc = run_cli(["cross-check", "--poly", poly, "--lines", "25"],
                   stdin=cons.stdout)
    assert proc.returncode == 0
