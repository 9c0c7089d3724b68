import json
import subprocess
import sys

import pytest

from pclab.cli import main


def invoke(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_certify_torsion(capsys):
    code, out, _ = invoke(capsys, "certify", "--m", "2", "--expr", "1/((1-x1)*(1-x1*x2))", "--N", "16")
    assert code == 0
    doc = json.loads(out)
    assert doc["schema"] == "pc-report/1"
    assert doc["verdict"] == "consistent_rational_torsion"


def test_certify_expect_torsion_exit_code(capsys):
    code, out, _ = invoke(capsys, "certify", "--expr", "gapfact()", "--N", "64", "--expect", "torsion")
    assert code == 3
    assert json.loads(out)["verdict"] == "irrational_in_window"


def test_remark_csv(capsys):
    code, out, _ = invoke(capsys, "remark", "--k", "1", "--N", "10")
    assert code == 0
    header, row = out.strip().splitlines()
    assert header == "k,N,log_dN,target,ratio"
    assert float(row.split(",")[-1]) == pytest.approx(0.783, abs=1e-3)


def test_hankel(capsys):
    code, out, _ = invoke(capsys, "hankel", "--expr", "expseries()", "--n", "2")
    assert code == 0 and out.strip() == "-1/144"


def test_expand_json_and_csv(capsys):
    code, out, _ = invoke(capsys, "expand", "--expr", "1/(1-x1-x2)", "--N", "3")
    doc = json.loads(out)
    assert doc["schema"] == "pc-table/1" and doc["m"] == 2
    code, out, _ = invoke(capsys, "expand", "--expr", "1/(1-2*x1)", "--N", "3", "--format", "csv")
    assert out.splitlines() == ["n1,c", "0,1", "1,2", "2,4", "3,8"]


def test_profile_schema(capsys):
    code, out, _ = invoke(capsys, "profile", "--expr", "1/(1-2*x1)", "--N", "20")
    doc = json.loads(out)
    assert doc["schema"] == "pc-profile/1" and doc["class"] == "linear"


def test_guess_recurrence(capsys):
    code, out, _ = invoke(capsys, "guess-recurrence", "--terms", "1,2,4,8,16,32,64,128,256,512", "--max-order", "2")
    assert code == 0 and out.strip() == "(-2)*g[n] + g[n+1] = 0"
    code, out, _ = invoke(capsys, "guess-recurrence", "--expr", "catalan()", "--max-order", "1", "--max-degree", "1", "--format", "json")
    assert json.loads(out)["found"] is True


def test_reconstruct_and_poles(capsys):
    code, out, _ = invoke(capsys, "reconstruct", "--expr", "1/((1-x1*x2)*(1-zeta(3)*x1))", "--N", "10", "--bounds", "0,3")
    assert json.loads(out)["torsion_form"] is True
    code, out, _ = invoke(capsys, "poles-check", "--expr", "1 - t^3")
    assert out.strip() == "true (Phi_1, Phi_3)"
    code, out, _ = invoke(capsys, "poles-check", "--expr", "1 - t - t^2", "--format", "json")
    assert json.loads(out)["roots_of_unity"] is False


def test_output_file(tmp_path, capsys):
    dest = tmp_path / "r.csv"
    code, out, _ = invoke(capsys, "remark", "--k", "2", "--N", "12", "--output", str(dest))
    assert code == 0 and out == ""
    assert dest.read_text().splitlines()[1].startswith("2,12,")


class TestErrors:
    def test_dsl_error_is_usage(self, capsys):
        code, _, err = invoke(capsys, "expand", "--expr", "1/x1", "--format", "json")
        assert code == 1
        doc = json.loads(err)
        assert doc["error"] == "usage" and "origin" in doc["message"]
        assert "\n" not in err.strip()

    def test_bad_flag(self, capsys):
        code, _, err = invoke(capsys, "certify", "--N", "zero")
        assert code == 1 and "usage" in err

    def test_no_command(self, capsys):
        assert invoke(capsys)[0] == 1

    def test_computation_error(self, capsys):
        code, _, err = invoke(capsys, "certify", "--expr", "1/(1-x1)", "--N", "4", "--format", "json")
        assert code == 2 and json.loads(err)["error"] == "computation"

    def test_env_precedence(self, capsys, monkeypatch):
        monkeypatch.setenv("PCLAB_TORSION_BOUND", "12")
        code, out, _ = invoke(capsys, "certify", "--expr", "1/(1-x1*x2)", "--N", "16")
        assert json.loads(out)["parameters"]["torsion_bound"] == 12
        code, out, _ = invoke(capsys, "certify", "--expr", "1/(1-x1*x2)", "--N", "16", "--torsion-bound", "6")
        assert json.loads(out)["parameters"]["torsion_bound"] == 6
        monkeypatch.setenv("PCLAB_TOL", "abc")
        assert invoke(capsys, "remark", "--k", "1", "--N", "5")[0] == 1


def test_entry_point_subprocess():
    proc = subprocess.run(
        [sys.executable, "-m", "pclab.cli", "remark", "--k", "1", "--N", "10"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[1].startswith("1,10,7.83")


def test_run_with_config(capsys):
    from pclab.cli import CliConfig, run

    code = run(CliConfig("remark", N=12, extra={"k": 2}))
    out = capsys.readouterr().out
    assert code == 0 and out.splitlines()[1].startswith("2,12,")
    code = run(CliConfig("hankel", expr="catalan()", extra={"n": 4}))
    assert code == 0 and capsys.readouterr().out.strip() == "1"
    assert run(CliConfig("nope")) == 1
