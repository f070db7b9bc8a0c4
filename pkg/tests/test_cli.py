import csv
import json

import pytest
from click.testing import CliRunner

from hydrogenoid.cli import cli, main, parse_grid
from hydrogenoid.errors import ParameterError
from hydrogenoid.radial import krein_constant


def _rows(text):
    return list(csv.reader(line for line in text.splitlines() if not line.startswith("#")))


def test_help():
    result = CliRunner().invoke(cli, ["--help"])
    assert result.exit_code == 0
    for command in ("spectrum", "fibration", "spectral-function", "kernel", "verify"):
        assert command in result.output


def test_spectrum(capsys):
    assert main(["spectrum", "--nu", "-1", "--alpha", "inf", "--n-max", "3"]) == 0
    out = capsys.readouterr().out
    rows = _rows(out)
    assert rows[0] == ["n", "E", "residual", "E_lo", "E_hi"]
    assert float(rows[1][1]) == -0.25
    assert len(rows) == 4


def test_spectrum_json(capsys):
    assert main(["spectrum", "--nu", "-1", "--alpha", "0", "--n-max", "2", "--format", "json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert set(data) == {"nu", "alpha", "points", "friedrichs_reference", "note"}
    assert len(data["points"]) == 2


def test_format_from_suffix(tmp_path):
    target = tmp_path / "out.json"
    assert main(["spectrum", "--nu", "-1", "--n-max", "1", "--out", str(target)]) == 0
    assert json.loads(target.read_text())["alpha"] == "inf"


def test_output_is_deterministic(tmp_path):
    first, second = tmp_path / "a.csv", tmp_path / "b.csv"
    args = ["spectrum", "--nu", "-1", "--alpha", "0.3", "--n-max", "5"]
    assert main(args + ["--out", str(first)]) == 0
    assert main(args + ["--out", str(second)]) == 0
    assert first.read_bytes() == second.read_bytes()


def test_repulsive_without_bound_state(capsys):
    assert main(["spectrum", "--nu", "1", "--alpha", "1.0"]) == 0
    out = capsys.readouterr().out
    assert "# note=alpha >= alpha_nu" in out
    assert len(_rows(out)) == 1


@pytest.mark.parametrize("args", [
    ["spectrum", "--nu", "0"],
    ["spectrum", "--alpha", "0"],
    ["spectrum", "--nu", "-1", "--alpha", "abc"],
    ["spectrum", "--nu", "-1", "--n-max", "0"],
    ["spectrum", "--nu", "-1", "--tol", "-1"],
    ["spectrum", "--nu", "-1", "--out", "spectrum.txt"],
    ["fibration", "--nu", "-1", "--alpha-grid", "1:0:3"],
    ["fibration", "--nu", "-1"],
    ["spectral-function", "--nu", "-1", "--e-grid", "-1:0.5:10"],
    ["kernel", "--nu", "-1", "--kappa", "-0.5", "--r", "1", "--rho", "1"],
    ["spectrum", "--bogus"],
])
def test_bad_input_exit_code(args, capsys):
    assert main(args) == 1
    assert capsys.readouterr().err


def test_unknown_config_key(tmp_path):
    config = tmp_path / "config.json"
    config.write_text(json.dumps({"nu": -1, "colour": "blue"}))
    assert main(["spectrum", "--config", str(config)]) == 1


def test_flags_override_config(tmp_path, capsys):
    config = tmp_path / "config.json"
    config.write_text(json.dumps({"nu": -2, "alpha": "inf", "n_max": 2}))
    assert main(["spectrum", "--config", str(config), "--nu", "-1"]) == 0
    rows = _rows(capsys.readouterr().out)
    assert len(rows) == 3
    assert float(rows[1][1]) == -0.25


def test_kernel_symmetric(capsys):
    assert main(["kernel", "--nu", "-1", "--alpha", "0.5", "--r", "0.7", "--rho", "1.6"]) == 0
    first = _rows(capsys.readouterr().out)
    assert main(["kernel", "--nu", "-1", "--alpha", "0.5", "--r", "1.6", "--rho", "0.7"]) == 0
    second = _rows(capsys.readouterr().out)
    assert first[0] == ["r", "rho", "kernel"]
    assert first[1][2] == second[1][2]


def test_kernel_three_dimensional(capsys):
    assert main(["kernel", "--nu", "-1", "--alpha", "0.5", "--r", "0.7", "--rho", "1.6",
                 "--kind", "3d", "--format", "json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["which"] == "3d"
    assert "g_nu_kappa_at_x" in data


def test_kernel_at_spectral_point(capsys):
    alpha = repr(krein_constant(-1.0, 0.5))
    assert main(["kernel", "--nu", "-1", "--alpha", alpha, "--kappa", "0.5",
                 "--r", "1", "--rho", "2"]) == 3
    assert "spectral point" in capsys.readouterr().err


def test_fibration(tmp_path):
    target = tmp_path / "fan.csv"
    assert main(["fibration", "--nu", "-1", "--alpha-grid", "-1:1:3", "--n-max", "2",
                 "--out", str(target)]) == 0
    rows = _rows(target.read_text())
    assert rows[0] == ["alpha", "n", "E"]
    assert len(rows) == 7
    assert not (tmp_path / "fan.csv.warnings.txt").exists()


def test_spectral_function(capsys):
    assert main(["spectral-function", "--nu", "-1", "--e-grid", "-1:-0.012:40"]) == 0
    out = capsys.readouterr().out
    assert "# asymptotes=" in out
    assert _rows(out)[0] == ["E", "F"]


def test_parse_grid():
    assert list(parse_grid("0:1:3")) == [0.0, 0.5, 1.0]
    assert parse_grid("-1:-0.01:3", geometric=True)[1] == pytest.approx(-0.1)
    assert list(parse_grid("1:3:2:lin", geometric=True)) == [1.0, 3.0]
    for text in ("0:1", "a:b:c", "1:0:3", "-1:1:3:log", "0:1:3:cubic"):
        with pytest.raises(ParameterError):
            parse_grid(text)


@pytest.mark.slow
def test_verify_default(capsys):
    assert main(["verify"]) == 0
    assert json.loads(capsys.readouterr().out)["passed"] is True


@pytest.mark.slow
def test_verify_detects_perturbation(capsys):
    assert main(["verify", "--psi-offset", "1e-3"]) == 4
    captured = capsys.readouterr()
    assert "krein_pole" in json.loads(captured.out)["failed"]
    assert "verification failed" in captured.err


@pytest.mark.slow
def test_verify_coupling_override_uses_matching_kappa(capsys):
    code = main(["verify", "--nu", "1", "--alpha", "-0.5", "--n-max", "1"])
    report = json.loads(capsys.readouterr().out)
    assert code in (0, 4)
    assert report["nu"] == 1.0
    assert report["kappa"] == -0.5
    assert all(isinstance(check["passed"], bool) for check in report["checks"])
