import json
import subprocess
import sys

import pytest

from cavityflip.artifacts import Table, read_csv, read_json, to_csv, to_json
from cavityflip.cli import main
from cavityflip.config import parse_config
from cavityflip.errors import ConfigError

STEADY = {"canonical": {"Gamma": 1.0, "beta": 0.8}, "drive": {"omega": 0.0, "flux": 1.0}}

CONFIGS = {
    "steady": STEADY,
    "phase-spectrum": {"canonical": {"Gamma": 1.0, "beta": 0.2}, "grid": {"start": 0.0, "stop": 3.0, "num": 31}},
    "intensity-sweep": {"canonical": {"Gamma": 1.0, "beta": 0.8}, "sweep": {"lo": -3, "hi": 3, "points": 13}},
    "dynamics": {"canonical": {"Gamma": 1.0, "beta": 0.8}, "drive": {"omega": 0.5, "flux": 1.0},
                 "integrator": {"dt": 0.01, "t_max": 5.0, "record_stride": 50}},
    "max-phase": {"canonical": {"Gamma": 1.0, "beta": 0.4}},
    "verify-oracle": {"canonical": {"Gamma": 1.0, "beta": 0.8}, "drive": {"flux": 0.0125},
                      "oracle": {"kappa_over_g": 50}},
}


def write_config(tmp_path, doc, name="config.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def test_parse_minimal_config():
    cfg = parse_config(json.dumps({"mode": "steady", **STEADY}))
    assert cfg.mode == "steady" and cfg.flux == 1.0 and cfg.canonical.beta == 0.8
    assert cfg.output_format == "csv" and cfg.output_path is None


def test_parse_raw_block():
    cfg = parse_config(json.dumps({"raw": {"g": 1, "kappa": 10, "gamma": 0.05}, "drive": {"flux": 1}}), mode="steady")
    assert cfg.canonical.Gamma == pytest.approx(0.125) and cfg.canonical.beta == pytest.approx(0.8)


@pytest.mark.parametrize(
    "doc, message",
    [
        ({"mode": "steady", **STEADY, "raw": {"g": 1, "kappa": 10}}, "exactly one parameter block"),
        ({"mode": "steady", "drive": {"flux": 1}}, "exactly one parameter block"),
        ({"mode": "steady", "canonical": {"Gamma": 1, "beta": 1.2}, "drive": {"flux": 1}}, "[0, 1]"),
        ({"mode": "steady", **STEADY, "extra": 1}, "unknown top-level key"),
        ({"mode": "steady", "canonical": {"Gamma": 1, "beta": 0.5, "b": 1}, "drive": {"flux": 1}}, "unknown key(s) in 'canonical'"),
        ({"mode": "steady", "canonical": {"Gamma": 1, "beta": 0.5}}, "drive.flux"),
        ({"mode": "phase-spectrum", "canonical": {"Gamma": 1, "beta": 0.5}}, "'grid' block"),
        ({"mode": "nope", **STEADY}, "mode must be one of"),
        ({**STEADY}, "no mode given"),
        ({"mode": "steady", "canonical": {"Gamma": "1", "beta": 0.5}, "drive": {"flux": 1}}, "must be a number"),
        ({"mode": "steady", **STEADY, "schema_version": 2}, "schema_version"),
        ({"mode": "verify-oracle", **STEADY}, "kappa_over_g"),
        ({"mode": "steady", **STEADY, "output": {"format": "xml"}}, "csv or json"),
    ],
)
def test_config_validation_errors(doc, message):
    with pytest.raises(ConfigError) as info:
        parse_config(json.dumps(doc))
    assert message in str(info.value)


def test_config_syntax_error_reports_position():
    with pytest.raises(ConfigError) as info:
        parse_config('{\n  "mode": "steady",\n  oops\n}')
    assert "line 3" in str(info.value)


def test_csv_and_json_round_trip():
    table = Table("demo", ["a", "b", "c"], [[0.1, float("nan"), "x"], [1e-300, 2, True]], {"beta": 0.2, "d": [1.0, 2.0]})
    back = read_json(to_json(table))
    assert back.columns == table.columns and back.metadata == {"beta": 0.2, "d": [1.0, 2.0]}
    assert back.rows[0][0] == 0.1 and back.rows[1][0] == 1e-300
    csv_back = read_csv(to_csv(table))
    assert csv_back.mode == "demo" and csv_back.columns == table.columns
    assert csv_back.rows[0][0] == 0.1 and csv_back.rows[1] == [1e-300, 2, True]
    assert csv_back.metadata["beta"] == "0.20000000000000001"


@pytest.mark.parametrize("mode", sorted(CONFIGS))
@pytest.mark.parametrize("fmt", ["csv", "json"])
def test_every_mode_writes_reparseable_artifact(tmp_path, capsys, mode, fmt):
    out = tmp_path / f"out.{fmt}"
    code = main([mode, "--config", write_config(tmp_path, CONFIGS[mode]), "--out", str(out), "--format", fmt])
    assert code == 0
    summary = capsys.readouterr().out
    assert summary.startswith(mode)
    table = (read_json if fmt == "json" else read_csv)(out.read_text())
    assert table.mode == mode and len(table.rows) >= 1
    assert all(len(r) == len(table.columns) for r in table.rows)


def test_max_phase_summary(tmp_path, capsys):
    out = tmp_path / "max.csv"
    assert main(["max-phase", "--config", write_config(tmp_path, CONFIGS["max-phase"]), "--out", str(out)]) == 0
    assert "phase*=41.81 deg at omega*=0.4472 Gamma" in capsys.readouterr().out
    row = read_csv(out.read_text()).rows[0]
    assert row[2] == pytest.approx(41.81, abs=0.01)


def test_steady_without_drive(tmp_path):
    out = tmp_path / "s.csv"
    doc = {"canonical": {"Gamma": 1.0, "beta": 0.5}, "drive": {"flux": 0.0}}
    assert main(["steady", "--config", write_config(tmp_path, doc), "--out", str(out)]) == 0
    t = read_csv(out.read_text())
    assert t.column("sigma_z") == [-0.5]


def test_verify_oracle_report(tmp_path):
    out = tmp_path / "o.json"
    assert main(["verify-oracle", "--config", write_config(tmp_path, CONFIGS["verify-oracle"]),
                 "--out", str(out), "--format", "json"]) == 0
    t = read_json(out.read_text())
    row = dict(zip(t.columns, t.rows[0]))
    assert row["elimination_error"] < 0.02
    assert row["truncation"] == 12 and row["route"] == "direct" and row["residual"] < 1e-10
    assert row["kappa_over_g"] == pytest.approx(50.0)


def test_exit_code_invalid_config(tmp_path):
    doc = {"canonical": {"Gamma": 1.0, "beta": 1.2}, "drive": {"flux": 1.0}}
    assert main(["steady", "--config", write_config(tmp_path, doc)]) == 2


def test_exit_code_degenerate(tmp_path):
    doc = {"canonical": {"Gamma": 1.0, "beta": 0.5}, "grid": {"start": 0.0, "stop": 1.0, "num": 5}}
    out = tmp_path / "spectrum.csv"
    assert main(["phase-spectrum", "--config", write_config(tmp_path, doc), "--out", str(out)]) == 3
    assert "degenerate_omega_over_gamma: 0" in out.read_text()


def test_exit_code_non_convergence(tmp_path):
    doc = {"canonical": {"Gamma": 1.0, "beta": 1.0}, "drive": {"flux": 400.0}, "integrator": {"dt": 0.1, "t_max": 1.0}}
    assert main(["dynamics", "--config", write_config(tmp_path, doc)]) == 4
    doc = {"raw": {"g": 1.0, "kappa": 1.0, "gamma": 1.0}, "drive": {"flux": 5.0}, "oracle": {"truncation": 2}}
    assert main(["verify-oracle", "--config", write_config(tmp_path, doc)]) == 4


def test_exit_code_io(tmp_path):
    path = write_config(tmp_path, CONFIGS["max-phase"])
    assert main(["max-phase", "--config", path, "--out", str(tmp_path / "missing" / "x.csv")]) == 5
    assert main(["max-phase", "--config", str(tmp_path / "absent.json")]) == 5


def test_stdout_artifact(tmp_path, capsys):
    assert main(["max-phase", "--config", write_config(tmp_path, CONFIGS["max-phase"]), "--format", "json"]) == 0
    captured = capsys.readouterr()
    assert read_json(captured.out).mode == "max-phase"
    assert captured.err.startswith("max-phase")


def test_console_entry_point(tmp_path):
    path = write_config(tmp_path, CONFIGS["max-phase"])
    proc = subprocess.run([sys.executable, "-m", "cavityflip.cli", "max-phase", "--config", path],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert read_csv(proc.stdout).columns[0] == "beta"
