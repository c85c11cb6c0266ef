import csv
import json

import pytest

from dmamimo import cli
from dmamimo.errors import SingularFrontEndError


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


def test_rates_to_file(tmp_path):
    out = tmp_path / "r.csv"
    code = cli.main(["rates", "--trials", "3", "--arch", "digital-N,dma-lorentzian", "--seed", "5",
                     "--out", str(out)])
    assert code == 0
    rows = read_csv(out)
    assert rows[0] == ["architecture", "snr_db", "mean_rate_bpshz", "ci95", "trials", "seed"]
    assert len(rows) == 1 + 2 * 6
    assert {r[0] for r in rows[1:]} == {"digital-N", "dma-lorentzian"}
    assert all(r[4] == "3" and r[5] == "5" for r in rows[1:])


def test_rates_to_stdout(capsys):
    assert cli.main(["rates", "--trials", "2", "--arch", "digital-M"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].startswith("architecture,")
    assert len(lines) == 7


def test_rates_from_config(tmp_path):
    cfg = tmp_path / "c.json"
    out = tmp_path / "r.csv"
    cfg.write_text(json.dumps({"scenario": {"num_trials": 2, "snr_grid": [0]},
                               "architectures": ["hybrid-full"], "output_path": str(out)}))
    assert cli.main(["rates", "--config", str(cfg)]) == 0
    assert read_csv(out)[1][:2] == ["hybrid-full", "0"]


@pytest.mark.parametrize(
    "argv",
    [
        ["rates", "--arch", "analog"],
        ["rates", "--trials", "0"],
        ["rates", "--seed", "-3"],
        ["rates", "--workers", "0", "--trials", "1"],
        ["pattern", "--elements", "0"],
        ["element-response", "--damping", "-1"],
    ],
)
def test_config_errors_exit_2(argv, capsys):
    assert cli.main(argv) == 2
    assert "config error" in capsys.readouterr().err


def test_unknown_config_key_exit_2(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"scenario": {"trials": 2}}))
    assert cli.main(["rates", "--config", str(cfg)]) == 2


def test_missing_output_dir_exit_4(tmp_path):
    assert cli.main(["rates", "--trials", "1", "--out", str(tmp_path / "no" / "r.csv")]) == 4


def test_missing_config_exit_4(tmp_path):
    assert cli.main(["rates", "--config", str(tmp_path / "absent.json")]) == 4


def test_singular_front_end_exit_3(monkeypatch):
    def singular(*a, **k):
        raise SingularFrontEndError(rows=(0,), condition_number=1e20)

    monkeypatch.setattr(cli, "run_experiment", singular)
    assert cli.main(["rates", "--trials", "1"]) == 3


def test_pattern(tmp_path, capsys):
    out = tmp_path / "p.csv"
    assert cli.main(["pattern", "--target", "30", "--set", "unconstrained", "--out", str(out)]) == 0
    rows = read_csv(out)
    assert rows[0] == ["angle_deg", "magnitude_db"]
    assert len(rows) == 1802
    peak = max(rows[1:], key=lambda r: float(r[1]))
    assert peak[0] == "30" and float(peak[1]) == 0.0
    assert "peak 30 deg" in capsys.readouterr().err


def test_element_response(tmp_path):
    out = tmp_path / "e.csv"
    assert cli.main(["element-response", "--resonances", "3.3e9,3.7e9", "--points", "11",
                     "--out", str(out)]) == 0
    rows = read_csv(out)
    assert rows[0] == ["resonance_hz", "frequency_hz", "normalized_magnitude"]
    assert len(rows) == 1 + 22
    assert max(float(r[2]) for r in rows[1:12]) == 1.0


def test_validate(capsys):
    assert cli.main(["validate", "--instances", "20"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert len(out) == 5 and all(line.startswith("PASS") for line in out)
