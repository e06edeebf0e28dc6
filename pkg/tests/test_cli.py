import csv
import json
import subprocess
import sys

import pytest

from evaplab import cli


def run(*args):
    return cli.main([str(a) for a in args])


def read_json(path):
    return json.loads(path.read_text())


def test_paradox_t1_onset(tmp_path, capsys):
    assert run("paradox", "--theorem", "t1", "--s-bh", 100, "--steps", 200, "--output-dir", tmp_path) == 0
    doc = read_json(tmp_path / "report.json")
    assert doc["onset_r"] == 50
    assert doc["theta"] == 0.01
    assert {"theorem", "params", "theta", "points", "onset_r"} <= set(doc)
    rows = list(csv.reader((tmp_path / "report.csv").open()))
    assert rows[0] == ["r", "lhs", "rhs", "margin", "contradiction", "assumptions"]
    assert len(rows) == len(doc["points"]) + 1
    assert "onset_r" in capsys.readouterr().out


def test_paradox_fixed_epoch_theorem(tmp_path):
    assert run("paradox", "--theorem", "T2-matter", "--output-dir", tmp_path) == 0
    doc = read_json(tmp_path / "report.json")
    assert doc["points"][0]["contradiction"] is True


def test_empty_config_is_usage_error(tmp_path):
    cfg = tmp_path / "empty.json"
    cfg.write_text("")
    assert run("paradox", "--config", cfg) == 1
    cfg.write_text("{}")
    assert run("run", cfg) == 1


def test_bad_flag_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        run("paradox", "--steps", "many")
    assert exc.value.code == 1


def test_unknown_command_is_usage_error():
    with pytest.raises(SystemExit) as exc:
        run("explode")
    assert exc.value.code == 1


def test_config_field_errors_name_the_field(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"command": "paradox", "params": {"steps": "lots"}}))
    assert run("run", cfg) == 1
    assert "config.params.steps" in capsys.readouterr().err
    cfg.write_text(json.dumps({"command": "paradox", "params": {"stepz": 3}}))
    assert run("run", cfg) == 1
    assert "config.params.stepz" in capsys.readouterr().err


def test_domain_errors_exit_one(tmp_path, capsys):
    assert run("paradox", "--s-bh", 10, "--s-matter", 20, "--output-dir", tmp_path) == 1
    assert run("paradox", "--steps", 1, "--output-dir", tmp_path) == 1


def test_flags_override_config(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"output_dir": str(tmp_path / "a"), "params": {"s_bh": 40, "steps": 40}}))
    assert run("paradox", "--config", cfg, "--s-bh", 60) == 0
    doc = read_json(tmp_path / "a" / "report.json")
    assert doc["params"]["s_bh"] == 60
    assert doc["steps"] == 40
    assert doc["onset_r"] == 30


def test_run_subcommand_reads_command_from_file(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"command": "lattice-decay", "output_dir": str(tmp_path), "params": {"n_sites": 30}}))
    assert run("run", cfg) == 0
    assert (tmp_path / "decay.csv").exists()


def test_mismatched_command_in_file(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"command": "lattice-decay"}))
    assert run("paradox", "--config", cfg) == 1


def test_page_curve_csv(tmp_path):
    assert run("page-curve", "--n-evap", 4, "--trials", 10, "--output-dir", tmp_path) == 0
    rows = list(csv.reader((tmp_path / "curve.csv").open()))
    assert rows[0] == [
        "r_qunats", "s_r_analytic", "mi_analytic", "s_r_mc_mean", "s_r_mc_stderr", "mi_mc_mean", "mi_mc_stderr",
    ]
    assert len(rows) == 6


def test_page_curve_analytic_only_leaves_mc_columns_empty(tmp_path):
    assert run("page-curve", "--trials", 0, "--steps", 10, "--output-dir", tmp_path) == 0
    rows = list(csv.reader((tmp_path / "curve.csv").open()))
    assert len(rows) == 12
    assert rows[3][3:] == ["", "", "", ""]


def test_lattice_outputs(tmp_path):
    assert run("lattice-decay", "--output-dir", tmp_path) == 0
    rows = list(csv.reader((tmp_path / "decay.csv").open()))
    assert rows[0] == ["d", "mutual_information_qunats"]
    fit = read_json(tmp_path / "fit.json")
    assert set(fit) == {"rate", "r_squared", "floor", "points_used"}
    assert fit["r_squared"] > 0.9


def test_lattice_uncoupled_reports_missing_fit(tmp_path):
    assert run("lattice-decay", "--coupling", 0, "--output-dir", tmp_path) == 0
    assert read_json(tmp_path / "fit.json")["rate"] is None


def test_lattice_regulator_error_is_usage(tmp_path):
    code = run("lattice-decay", "--self-freq", 0, "--boundary", "periodic", "--output-dir", tmp_path)
    assert code == 1


def test_nocomm_verify_small(tmp_path):
    assert run("nocomm-verify", "--samples", 5, "--seed", 1, "--output-dir", tmp_path) == 0
    doc = read_json(tmp_path / "verify.json")
    assert doc["passed"] is True
    assert [r["check"] for r in doc["results"]] == ["eq2", "eq6"]


def test_nocomm_violation_exits_two(tmp_path, monkeypatch):
    from evaplab.nocomm import VerificationResult

    def broken(*args, **kwargs):
        return VerificationResult("eq6", 1, {}, -1.0, -1e-9, [{"sample": 0, "margin": -1.0}])

    monkeypatch.setattr(cli, "verify_eq6", broken)
    assert run("nocomm-verify", "--samples", 1, "--checks", "eq6", "--output-dir", tmp_path) == 2


def test_haar_verify(tmp_path):
    code = run("haar-verify", "--samples", 300, "--qubit-samples", 2000, "--output-dir", tmp_path)
    assert code == 0
    assert read_json(tmp_path / "verify.json")["passed"] is True


def test_capacity_error_is_usage(tmp_path, monkeypatch):
    monkeypatch.setenv("EVAPLAB_CAPACITY", "16")
    assert run("page-curve", "--n-evap", 6, "--trials", 2, "--output-dir", tmp_path) == 1


@pytest.mark.parametrize(
    "args, files",
    [
        (["paradox", "--theorem", "T2"], ["report.json", "report.csv"]),
        (["page-curve", "--n-evap", 5, "--trials", 20], ["curve.csv"]),
        (["nocomm-verify", "--samples", 4], ["verify.json"]),
        (["lattice-decay"], ["decay.csv", "fit.json"]),
        (["haar-verify", "--samples", 100, "--qubit-samples", 500], ["verify.json"]),
    ],
)
def test_reruns_are_byte_identical(tmp_path, args, files):
    for out in ("one", "two"):
        assert run(*args, "--seed", 3, "--output-dir", tmp_path / out) == 0
    for name in files:
        assert (tmp_path / "one" / name).read_bytes() == (tmp_path / "two" / name).read_bytes()


def test_twelve_significant_digits(tmp_path):
    run("paradox", "--theorem", "T2-matter", "--s-bh", 3, "--output-dir", tmp_path)
    text = (tmp_path / "report.json").read_text()
    for token in text.replace(",", " ").split():
        if "." in token and token[0].isdigit():
            digits = token.split("e")[0].replace(".", "").lstrip("0")
            assert len(digits) <= 12


def test_bits_only_change_the_summary(tmp_path, capsys):
    run("lattice-decay", "--units", "bits", "--output-dir", tmp_path / "b")
    run("lattice-decay", "--output-dir", tmp_path / "q")
    assert "(bits)" in capsys.readouterr().out
    assert (tmp_path / "b" / "decay.csv").read_bytes() == (tmp_path / "q" / "decay.csv").read_bytes()


def test_module_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "evaplab", "paradox", "--steps", "20", "--output-dir", str(tmp_path)],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert (tmp_path / "report.json").exists()
