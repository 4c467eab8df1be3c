import csv
import json

import pytest

from smspin.cli import main
from smspin.cli.checks import select
from smspin.cli.config import ENV_VAR, ConfigError, load_config


def write(tmp_path, text, name="c.toml"):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def report(out):
    return json.loads((out / "report.json").read_text())


# --- configuration ------------------------------------------------------------

@pytest.mark.parametrize("text, msg", [
    ("[run]\nbogus = 1\n", "unknown configuration key"),
    ("[run]\nseed = -1\n", "seed"),
    ("[run]\nseed = true\n", "seed"),
    ("[geometry]\ns_sequence = [\"1/16\", \"1/8\"]\n", "decreasing"),
    ("[geometry]\ns_sequence = []\n", "must not be empty"),
    ("[geometry]\nr_mode = \"spline\"\n", "r_mode"),
    ("[tolerances]\nratio_low = 0.7\n", "ratio_low"),
    ("[background]\nA = [{ exponent = [0, 0, 0], coef = [[0.1], [0], [0], [0]] }]\n", "exponent"),
    ("[group]\npreset = \"custom\"\n", "table"),
    ("run = 3\n", "table"),
    ("[run\n", "cannot parse"),
])
def test_bad_config_exits_2(tmp_path, capsys, text, msg):
    assert main(["verify", "--config", write(tmp_path, text), "--out", str(tmp_path)]) == 2
    assert msg in capsys.readouterr().err
    assert not (tmp_path / "report.json").exists()


def test_missing_config_exits_2(tmp_path, capsys):
    assert main(["sm-check", "--config", str(tmp_path / "nope.toml"), "--out", str(tmp_path)]) == 2
    assert "cannot read" in capsys.readouterr().err


@pytest.mark.parametrize("flag", [["--jobs", "0"], ["--seed", "-3"]])
def test_bad_flags_exit_2(tmp_path, flag):
    assert main(["sm-check", "--out", str(tmp_path)] + flag) == 2


def test_unwritable_output_exits_2(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("")
    assert main(["sm-check", "--out", str(blocker / "sub")]) == 2


def test_env_var_supplies_default(tmp_path, monkeypatch):
    monkeypatch.setenv(ENV_VAR, write(tmp_path, "[run]\nseed = 42\n"))
    assert load_config(None).seed == 42
    # an explicit path wins over the environment
    assert load_config(write(tmp_path, "[run]\nseed = 5\n", "d.toml")).seed == 5


def test_env_var_pointing_nowhere(tmp_path, monkeypatch):
    monkeypatch.setenv(ENV_VAR, str(tmp_path / "missing.toml"))
    with pytest.raises(ConfigError):
        load_config(None)


def test_partial_file_keeps_defaults(tmp_path):
    cfg = load_config(write(tmp_path, "[geometry]\nrho = 0.1\n"))
    assert cfg.geometry("rho") == 0.1 and cfg.geometry("eps0") == 0.5


# --- check selection ----------------------------------------------------------

NAMES = ["clifford.square", "clifford.gamma5", "microlocal.certificate.0", "microlocal.certificate.1", "sm.center_dim"]


@pytest.mark.parametrize("pattern, want", [
    ("", []),
    (" , ", []),
    ("*", sorted(NAMES)),
    ("clifford", ["clifford.gamma5", "clifford.square"]),
    ("clifford.", ["clifford.gamma5", "clifford.square"]),
    ("microlocal.certificate", ["microlocal.certificate.0", "microlocal.certificate.1"]),
    ("*.1,sm", ["microlocal.certificate.1", "sm.center_dim"]),
    ("cliff", []),
    ("clifford.square", ["clifford.square"]),
])
def test_select(pattern, want):
    assert select(NAMES, pattern) == want


# --- commands -----------------------------------------------------------------

def test_sm_check_passes(tmp_path, capsys):
    assert main(["sm-check", "--out", str(tmp_path)]) == 0
    rep = report(tmp_path)
    assert rep["command"] == "sm-check" and rep["summary"]["status"] == "pass"
    assert rep["summary"]["total"] == len(rep["checks"]) > 0
    assert "checks passed" in capsys.readouterr().out


def test_empty_selection_gives_empty_report(tmp_path):
    assert main(["verify", "--checks", "", "--out", str(tmp_path)]) == 0
    rep = report(tmp_path)
    assert rep["checks"] == [] and rep["summary"]["total"] == 0


def test_selected_clifford_checks(tmp_path):
    assert main(["verify", "--checks", "clifford", "--out", str(tmp_path)]) == 0
    names = [c["name"] for c in report(tmp_path)["checks"]]
    assert names and all(n.startswith("clifford.") for n in names)


@pytest.mark.parametrize("pert", ["\"1/1000\"", "0.001"])
def test_gamma_perturbation_fails(tmp_path, pert):
    cfg = write(tmp_path, f"[run]\ngamma_perturbation = {pert}\n")
    assert main(["verify", "--config", cfg, "--checks", "clifford.anticommutator", "--out", str(tmp_path)]) == 1
    rep = report(tmp_path)
    assert rep["summary"]["failed_checks"] == ["clifford.anticommutator"]


def test_seed_override_changes_digest_not_jobs(tmp_path):
    a, b, c = (tmp_path / k for k in "abc")
    main(["sm-check", "--out", str(a), "--seed", "1"])
    main(["sm-check", "--out", str(b), "--seed", "1", "--jobs", "2"])
    main(["sm-check", "--out", str(c), "--seed", "2"])
    assert report(a)["config_digest"] == report(b)["config_digest"] != report(c)["config_digest"]
    assert (a / "report.json").read_bytes() == (b / "report.json").read_bytes()


def test_scan_without_s_values_writes_header(tmp_path):
    cfg = write(tmp_path, "[geometry]\nscan_s = []\n")
    assert main(["scan", "--config", cfg, "--out", str(tmp_path)]) == 0
    rows = list(csv.reader((tmp_path / "scan.csv").open()))
    assert rows == [["s", "jet_residual", "numeric_residual", "dual_mode_gap", "ratio", "recovery_error"]]
    assert report(tmp_path)["checks"] == []


def test_scan_two_values(tmp_path):
    cfg = write(tmp_path, "[geometry]\nscan_s = [\"1/8\", \"1/16\"]\n")
    assert main(["scan", "--config", cfg, "--out", str(tmp_path)]) == 0
    rows = list(csv.DictReader((tmp_path / "scan.csv").open()))
    assert [r["s"] for r in rows] == ["1/8", "1/16"]
    assert rows[0]["ratio"] == "" and 0.4 <= float(rows[1]["ratio"]) <= 0.6
    assert all(r["recovery_error"] == "" for r in rows)
    assert all(float(r["dual_mode_gap"]) <= 1e-10 for r in rows)


def test_recover_small_grid(tmp_path):
    cfg = write(tmp_path, "[geometry]\ngrid_t = [0.0, 0.0, 1]\ngrid_x = [0.2, 0.3, 2]\nrefinement = []\n"
                          "[run]\nnodes = 16\n")
    assert main(["recover", "--config", cfg, "--out", str(tmp_path)]) == 0
    rec = json.loads((tmp_path / "recovery.json").read_text())
    assert len(rec["recovery"]["points"]) == 2 and rec["refinement"] == []
    assert rec["recovery"]["max_relative_error"] <= 0.02
    assert [c["name"] for c in report(tmp_path)["checks"]] == ["recovery.max_relative_error"]


def test_recover_reports_unreachable(tmp_path, capsys):
    cfg = write(tmp_path, "[geometry]\ngrid_t = [0.9, 0.9, 1]\ngrid_x = [0.05, 0.05, 1]\nrefinement = []\n")
    assert main(["recover", "--config", cfg, "--out", str(tmp_path)]) == 0
    assert "unreachable" in capsys.readouterr().err
    rec = json.loads((tmp_path / "recovery.json").read_text())
    assert len(rec["recovery"]["unreachable"]) == 1


def test_recover_rejects_sector_violation(tmp_path):
    cfg = write(tmp_path, "[background]\npsi = [{ exponent = [0, 0, 0, 0], "
                          "coef = [[0, 1], [0, 0], [0, 0], [0, 0]] }]\n")
    assert main(["recover", "--config", cfg, "--out", str(tmp_path)]) == 2


def test_help_lists_commands(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--help"])
    assert exc.value.code == 0
    out = capsys.readouterr().out
    assert all(c in out for c in ("verify", "sm-check", "recover", "scan"))
