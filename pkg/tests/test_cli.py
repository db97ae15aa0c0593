import json
import math
import os
import subprocess
import sys
from pathlib import Path

import pytest

from confsoliton.cli import main
from confsoliton.corpus import BUILTINS

GOLDEN = Path(__file__).parent / "golden" / "reports"
UPDATE = os.environ.get("CONFSOLITON_UPDATE_GOLDENS") == "1"


def run(*args, cwd=None):
    return subprocess.run([sys.executable, "-m", "confsoliton", *args], capture_output=True,
                          text=True, cwd=cwd)


def write(tmp_path, text, name="run.cfg"):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return str(path)


def assert_close(got, want, path="$"):
    """Structural equality with a numeric tolerance for floats."""
    if isinstance(want, dict):
        assert isinstance(got, dict) and list(got) == list(want), path
        for k in want:
            assert_close(got[k], want[k], f"{path}.{k}")
    elif isinstance(want, list):
        assert isinstance(got, list) and len(got) == len(want), path
        for i, (g, w) in enumerate(zip(got, want)):
            assert_close(g, w, f"{path}[{i}]")
    elif isinstance(want, float) and not isinstance(want, bool):
        assert isinstance(got, (int, float)), path
        assert math.isclose(got, want, rel_tol=1e-9, abs_tol=1e-12), (path, got, want)
    else:
        assert got == want, (path, got, want)


def test_frames_sphere(capsys):
    assert main(["frames", "--builtin", "sphere", "--grid", "5", "--json"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["schema"] == "confsoliton-report/1" and rep["command"] == "frames"
    assert len(rep["records"]) == 25
    for r in rep["records"]:
        assert [k for k, _ in r["kappa"]] == pytest.approx([-1.0, -1.0], abs=1e-12)
        assert r["shape_type"] == "DiagonalizableReal"


def test_frames_plane(capsys):
    assert main(["frames", "--builtin", "plane", "--json"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert all(r["alpha"] == 0 and r["lambda"] == 1 for r in rep["records"])


def test_frames_index_two_has_no_type(capsys):
    assert main(["frames", "--builtin", "pseudo_sphere3", "--grid", "2", "--json"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert all(r["shape_type"] is None for r in rep["records"])


def test_resolution_one_is_a_config_error(tmp_path, capsys):
    cfg = write(tmp_path, "[chart]\nbuiltin = sphere\n[grid]\nresolution = 1\n")
    assert main(["frames", "--config", cfg]) == 1
    err = capsys.readouterr().err
    assert "config error" in err and "line 4" in err


@pytest.mark.parametrize("name,code", [("cone", 0), ("lorentz_cone", 0), ("paraboloid", 2),
                                       ("helicoid", 2), ("sphere", 0)])
def test_check_exit_codes(name, code):
    assert main(["check", "--builtin", name]) == code


def test_check_cone_phi(capsys):
    main(["check", "--builtin", "cone", "--json"])
    s = json.loads(capsys.readouterr().out)["soliton"]
    assert s["verdict"] == "IS_SOLITON"
    assert abs(s["phi_min"] - 1) <= 1e-9 and abs(s["phi_max"] - 1) <= 1e-9


def test_check_helicoid_minimal(capsys):
    main(["check", "--builtin", "helicoid", "--json"])
    rep = json.loads(capsys.readouterr().out)
    assert rep["soliton"]["minimal"] is True
    assert abs(rep["soliton"]["phi_min"] - 1) <= 1e-9 and abs(rep["soliton"]["phi_max"] - 1) <= 1e-9
    oracle = {o["name"]: o for o in rep["oracles"]}["minimal_phi_one"]
    assert oracle["status"] == "PASS"


def test_check_borderline(tmp_path):
    cfg = write(tmp_path, "[chart]\nx1 = u1\nx2 = u2\nx3 = 1 + a*(u1^2 + u2^2)\n"
                          "[params]\na = 0.01\n[domain]\nu1 = -1, 1\nu2 = -1, 1\n"
                          "[grid]\nresolution = 5\n")
    assert main(["check", "--config", cfg]) == 3


@pytest.mark.parametrize("name,tag", [("sphere", "PseudoSphere"), ("hyperbolic", "PseudoHyperbolic"),
                                      ("cone", "Cone"), ("plane", "Hyperplane")])
def test_classify_tags(name, tag, capsys):
    assert main(["classify", "--builtin", name, "--json"]) == 0
    assert json.loads(capsys.readouterr().out)["verdict"]["tag"] == tag


def test_classify_indeterminate_exit():
    assert main(["classify", "--builtin", "paraboloid"]) == 4


def test_verify_default_passes(capsys):
    assert main(["verify", "--json"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["passed"] and all(i["status"] == "PASS" for i in rep["identities"])


def test_verify_minimal_corpus(capsys):
    assert main(["verify", "--builtin", "helicoid", "--json"]) == 0
    rep = json.loads(capsys.readouterr().out)
    line = {i["name"]: i for i in rep["identities"]}["minimal_phi_one"]
    assert line["status"] == "PASS" and line["charts_exercised"] >= 1


def test_verify_with_paraboloid(capsys):
    assert main(["verify", "--builtin", "paraboloid", "--builtin", "sphere", "--json"]) == 0
    lines = {i["name"]: i for i in json.loads(capsys.readouterr().out)["identities"]}
    for name in ("soliton_shape_relation", "umbilic_forcing"):
        assert "paraboloid" in lines[name]["skipped_for"]
    for name in ("lie_derivative_shape_identity", "trace_identity", "gauss_equation",
                 "codazzi_equation", "gradient_structure"):
        assert lines[name]["status"] == "PASS" and "paraboloid" not in lines[name]["skipped_for"]


def test_verify_failure_exits_five():
    assert main(["verify", "--builtin", "sphere", "--tol", "certificate=1e-30"]) == 5


def test_numeric_failure_exits_five(tmp_path):
    # every grid point sits on the excluded locus
    cfg = write(tmp_path, "[chart]\nx1 = u1\nx2 = u2\nx3 = 0\nexcluded = u1 - u1\n"
                          "[domain]\nu1 = 0, 1\nu2 = 0, 1\n")
    assert main(["check", "--config", cfg]) == 5


def test_plotdata(tmp_path):
    out = tmp_path / "sphere.csv"
    assert main(["plotdata", "--builtin", "sphere", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "# confsoliton-plotdata/1"
    assert lines[1] == "u1,u2,x1,x2,x3,lambda,phi,residual"
    assert len(lines) == 2 + 81


@pytest.mark.parametrize("name,check", [("plane", lambda lam: lam == 1.0),
                                        ("cone", lambda lam: abs(lam) <= 1e-10)])
def test_plotdata_lambda_column(name, check, capsys):
    assert main(["plotdata", "--builtin", name]) == 0
    lines = capsys.readouterr().out.splitlines()
    col = lines[1].split(",").index("lambda")
    rows = lines[2:]
    assert rows and all(check(float(r.split(",")[col])) for r in rows)


def test_out_file_and_summary(tmp_path):
    out = tmp_path / "r.json"
    res = run("check", "--builtin", "cone", "--out", str(out))
    assert res.returncode == 0
    assert res.stdout.startswith("IS_SOLITON")
    assert json.loads(out.read_text())["command"] == "check"


def test_usage_errors():
    assert run().returncode == 1
    assert run("explode").returncode == 1
    assert run("check", "--param", "nonsense").returncode == 1
    res = run("check", "--builtin", "nowhere")
    assert res.returncode == 1 and "unknown builtin" in res.stderr
    assert run("check", "--config", "/nonexistent/file.cfg").returncode == 1
    assert run("check", "--builtin", "sphere", "--tol", "soliton=-1").returncode == 1


def test_reports_are_byte_identical():
    a = run("verify", "--json")
    b = run("verify", "--json")
    assert a.returncode == b.returncode == 0
    assert a.stdout == b.stdout
    c = run("classify", "--builtin", "lorentz_cone", "--json")
    d = run("classify", "--builtin", "lorentz_cone", "--json")
    assert c.stdout == d.stdout


@pytest.mark.parametrize("name", sorted(BUILTINS))
def test_classify_golden(name, capsys):
    main(["classify", "--builtin", name, "--json"])
    got = json.loads(capsys.readouterr().out)
    path = GOLDEN / f"classify_{name}.json"
    if UPDATE:
        GOLDEN.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(got, indent=2) + "\n", encoding="utf-8")
    assert_close(got, json.loads(path.read_text(encoding="utf-8")))


def test_verify_golden(capsys):
    main(["verify", "--json"])
    got = json.loads(capsys.readouterr().out)
    path = GOLDEN / "verify.json"
    if UPDATE:
        path.write_text(json.dumps(got, indent=2) + "\n", encoding="utf-8")
    assert_close(got, json.loads(path.read_text(encoding="utf-8")))
