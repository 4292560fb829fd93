import json
import math

import pytest
import yaml

from src.cli import main
from src.report import Check, ResultRow, VerificationReport, recheck_report, rows_to_csv


@pytest.fixture
def config_file(tmp_path, config):
    path = tmp_path / "config.yaml"
    path.write_text(yaml.safe_dump(config), encoding="utf-8")
    return path


def _run(config_file, *argv):
    return main([*argv, "--config", str(config_file)])


def test_check_semantics():
    assert Check("a", 1.0, ">=", 1.0).holds()
    assert not Check("a", 0.9, ">=", 1.0).holds()
    assert not Check("a", math.nan, "<=", 1.0).holds()
    with pytest.raises(ValueError, match="comparison"):
        Check("a", 1.0, "==", 1.0)


def test_row_without_checks_passes_vacuously():
    assert ResultRow(suite="x", name="trivial", n=4, status="trivial").passed


def test_report_is_self_checking():
    report = VerificationReport(command="verify", config={})
    report.add(ResultRow(suite="s", name="ok", n=2, checks=(Check("c", 1.0, "<=", 2.0),)))
    report.add(ResultRow(suite="s", name="bad", n=2, checks=(Check("c", 3.0, "<=", 2.0),)))
    data = json.loads(report.to_json())
    assert data["schema"] == 1
    assert data["summary"] == {"failed": 1, "pass": False, "rows": 2}
    assert recheck_report(data)
    data["rows"][1]["pass"] = True
    assert not recheck_report(data)


def test_csv_quoting():
    text = rows_to_csv([{"name": "a, b", "value": 1}, {"name": 'say "hi"', "extra": 2}])
    lines = text.split("\r\n")
    assert lines[0] == "name,value,extra"
    assert lines[1] == '"a, b",1,'
    assert lines[2] == '"say ""hi""",,2'


def test_spectrum_command_outputs(config_file, capsys):
    assert _run(config_file, "spectrum", "--n", "5", "--k", "4", "--mmax", "0") == 0
    assert "|lambda|min = 6.5625" in capsys.readouterr().out
    assert _run(config_file, "spectrum", "--n", "3", "--k", "1", "--mmax", "4", "--format", "json") == 0
    data = json.loads(capsys.readouterr().out)
    assert [r["lambda_plus"] for r in data["rows"]] == [1.5, 2.5, 3.5, 4.5, 5.5]


def test_invalid_arguments_exit_2(config_file, capsys):
    assert _run(config_file, "spectrum", "--n", "0") == 2
    assert "--n must be" in capsys.readouterr().err
    assert _run(config_file, "verify", "--suite", "sphere", "--n", "7") == 2


def test_missing_config_exit_2(tmp_path):
    assert main(["constants", "--config", str(tmp_path / "absent.yaml")]) == 2


def test_verify_sphere_passes_and_is_deterministic(config_file, tmp_path):
    outs = []
    for i in range(2):
        out = tmp_path / f"run{i}.json"
        code = _run(
            config_file, "verify", "--suite", "sphere", "--n", "2", "--k", "1", "--seed", "7",
            "--format", "json", "--out", str(out),
        )
        assert code == 0
        data = json.loads(out.read_text(encoding="utf-8"))
        data.pop("timing")
        outs.append(data)
    assert outs[0] == outs[1]
    row = outs[0]["rows"][0]
    assert row["measured"]["extremal_ratio"] == pytest.approx(1.0)
    names = [r["name"] for r in outs[0]["rows"]]
    assert "C_1 convolution inverts D_S" in names


def test_tolerance_override_can_fail_a_row(config_file, capsys):
    code = _run(config_file, "verify", "--suite", "sphere", "--n", "2", "--tol-sharpness-sphere", "-1")
    assert code == 1
    assert "[FAIL]" in capsys.readouterr().out


def test_verify_euclidean_breakdown_row_is_trivial(config_file, capsys):
    code = _run(config_file, "verify", "--suite", "euclidean", "--n", "4", "--k", "4", "--trials", "2", "--format", "json")
    data = json.loads(capsys.readouterr().out)
    statuses = {r["name"]: r["status"] for r in data["rows"]}
    assert statuses["weighted D^4 lower bound"] == "trivial"
    assert code == 0


def test_identities_command(config_file, capsys):
    assert _run(config_file, "identities", "--identity", "eq1", "--k", "3", "--n", "2", "--format", "csv") == 0
    out = capsys.readouterr().out
    assert "measured.residual" in out.splitlines()[0]
    assert _run(config_file, "identities", "--identity", "ahlfors", "--map", "cayley") == 0


def test_constants_command(config_file, capsys):
    assert _run(config_file, "constants", "--kmax", "2", "--nmax", "3", "--format", "json") == 0
    rows = json.loads(capsys.readouterr().out)["rows"]
    lookup = {(r["n"], r["k"]): r for r in rows}
    assert lookup[(3, 1)]["euclidean_constant"] == pytest.approx(3.0)
    assert lookup[(3, 2)]["sharp_constant"] == pytest.approx(0.75)


def test_log_file_records_runs(config_file, config, capsys):
    _run(config_file, "constants", "--kmax", "1", "--nmax", "1")
    log = (config_file.parent / "logs" / "dirac_sharp.log").read_text(encoding="utf-8")
    assert "SUCCESS | command=constants" in log


def test_relative_out_lands_in_output_dir(config_file, tmp_path):
    assert _run(config_file, "constants", "--kmax", "1", "--nmax", "2", "--format", "csv", "--out", "table.csv") == 0
    text = (tmp_path / "output" / "table.csv").read_text(encoding="utf-8")
    assert text.startswith("n,k,sharp_constant,euclidean_constant\r\n")
