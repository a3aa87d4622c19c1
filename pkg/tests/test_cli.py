import json

import pytest
from click.testing import CliRunner

from ergorate import cli, eliminate, rwmodel

from conftest import two_step_model


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def two_step_file(tmp_path):
    path = tmp_path / "two_step.json"
    path.write_text(json.dumps(rwmodel.model_to_dict(two_step_model(0.1, 0.1))))
    return str(path)


@pytest.fixture
def bd_file(tmp_path):
    from ergorate import closedform

    model = closedform.bd_model(closedform.BirthDeathParams(p=0.7, q=0.3, r=0.0, a=0.1))
    path = tmp_path / "bd.json"
    path.write_text(json.dumps(rwmodel.model_to_dict(model)))
    return str(path)


@pytest.fixture
def bad_file(tmp_path):
    doc = {"g": 1, "d": 1, "a": [0.2, 0.1, 0.7], "boundary": [[0.5, 0.5]], "c": 1}
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc))
    return str(path)


def test_drift_command(runner, two_step_file):
    result = runner.invoke(cli.main, ["drift", two_step_file])
    assert result.exit_code == 0
    assert "0.621449" in result.output
    assert "2.17998" in result.output
    assert "NERI: holds" in result.output


def test_drift_non_neri_exits_2(runner, bad_file):
    result = runner.invoke(cli.main, ["drift", bad_file])
    assert result.exit_code == 2
    assert "not geometrically contracting" in result.output


def test_eta_command(runner, two_step_file):
    result = runner.invoke(cli.main, ["eta", two_step_file, "--samples", "50"])
    assert result.exit_code == 0
    assert "eta = 2" in result.output


def test_rate_command_human(runner, two_step_file):
    result = runner.invoke(cli.main, ["rate", two_step_file])
    assert result.exit_code == 0
    assert "rho_hat   = 0.688073" in result.output
    assert "both" in result.output


def test_rate_json_round_trip(runner, two_step_file):
    result = runner.invoke(cli.main, ["rate", two_step_file, "--json"])
    assert result.exit_code == 0
    parsed = json.loads(result.output)
    report = eliminate.rate(rwmodel.load_model(two_step_file)).to_dict()
    assert parsed == report


def test_rate_validation_exit(runner, bad_file):
    result = runner.invoke(cli.main, ["rate", bad_file])
    assert result.exit_code == 2


def test_rate_scan_density_flag(runner, bd_file):
    result = runner.invoke(cli.main, ["rate", bd_file, "--scan-density", "32x128"])
    assert result.exit_code == 0
    assert "rho_hat   = 0.95" in result.output


def test_rate_method_flag(runner, bd_file):
    result = runner.invoke(cli.main, ["rate", bd_file, "--method", "resultant", "--json"])
    assert result.exit_code == 0
    assert json.loads(result.output)["method"] == "resultant"


def test_bd_command(runner):
    result = runner.invoke(
        cli.main, ["bd", "--p", "0.7", "--q", "0.3", "--a", "0.1", "--json"]
    )
    assert result.exit_code == 0
    doc = json.loads(result.output)
    assert doc["rho_hat"] == pytest.approx(0.95)
    assert doc["lambda_a"] == pytest.approx(-0.95)
    assert doc["z_a"] == pytest.approx(-7 / 6)


def test_bd_check_agrees(runner):
    result = runner.invoke(
        cli.main,
        ["bd", "--p", "0.6", "--q", "0.25", "--a", "0.4", "--check", "--json"],
    )
    assert result.exit_code == 0
    doc = json.loads(result.output)
    assert doc["agreement"] is True


def test_bd_invalid_params(runner):
    result = runner.invoke(cli.main, ["bd", "--p", "0.3", "--q", "0.4", "--a", "0.5"])
    assert result.exit_code == 2


def test_speksma_command(runner):
    result = runner.invoke(
        cli.main, ["speksma", "--p", "0.6", "--gamma", "1.5", "--json"]
    )
    assert result.exit_code == 0
    doc = json.loads(result.output)
    assert doc["bound"] == pytest.approx(0.6)
    assert doc["eigen_residual"] <= 1e-12


def test_rosen_command(runner):
    result = runner.invoke(cli.main, ["rosen", "--json"])
    assert result.exit_code == 0
    doc = json.loads(result.output)
    assert doc["bound"] == 0.5
    assert doc["point_spectrum"] == [0.0, 1.0]


def test_verify_command(runner, bd_file):
    result = runner.invoke(
        cli.main, ["verify", bd_file, "--truncate", "200", "--json"]
    )
    assert result.exit_code == 0
    doc = json.loads(result.output)
    assert doc["difference"] <= 0.06


def test_table_command(runner):
    result = runner.invoke(cli.main, ["table"])
    assert result.exit_code == 0
    assert "0.621" in result.output
    assert "0.688" in result.output
    assert "0.757" in result.output
    assert "empty" in result.output


def test_table_deterministic(runner):
    a = runner.invoke(cli.main, ["table", "--scan-density", "32x128"])
    b = runner.invoke(cli.main, ["table", "--scan-density", "32x128"])
    assert a.output == b.output


def test_speksma_family_file(runner, tmp_path):
    doc = {"family": "speksma", "p": 0.5, "boundary": {"type": "geometric", "theta": 0.4}}
    path = tmp_path / "speksma.json"
    path.write_text(json.dumps(doc))
    result = runner.invoke(cli.main, ["speksma", str(path), "--gamma", "1.2", "--json"])
    assert result.exit_code == 0
    assert json.loads(result.output)["bound"] == pytest.approx(0.6)


def test_rosen_family_file(runner, tmp_path):
    doc = {
        "family": "rosen",
        "pi0": 0.9,
        "tail": {"type": "finite", "weights": [0.06, 0.04]},
    }
    path = tmp_path / "rosen.json"
    path.write_text(json.dumps(doc))
    result = runner.invoke(cli.main, ["rosen", str(path), "--json"])
    assert result.exit_code == 0
    assert json.loads(result.output)["bound"] == pytest.approx(0.1)


def test_family_file_kind_mismatch(runner, tmp_path):
    doc = {"family": "rosen", "pi0": 0.5, "tail": {"type": "geometric", "theta": 0.5, "total": 0.5}}
    path = tmp_path / "rosen.json"
    path.write_text(json.dumps(doc))
    result = runner.invoke(cli.main, ["speksma", str(path), "--gamma", "1.5"])
    assert result.exit_code == 2


def test_rate_disagreement_exit_code(runner, two_step_file, monkeypatch):
    real = eliminate.rate

    def fake(model, **kw):
        rep = real(model, **kw)
        rep.disagreement = True
        rep.provenance["disagreement"] = "forced for the exit-code test"
        return rep

    monkeypatch.setattr(cli.eliminate, "rate", fake)
    result = runner.invoke(cli.main, ["rate", two_step_file])
    assert result.exit_code == 3


def test_rate_numerical_failure_exit_code(runner, two_step_file, monkeypatch):
    from ergorate.errors import NonConvergence

    def boom(model, **kw):
        raise NonConvergence("forced")

    monkeypatch.setattr(cli.eliminate, "rate", boom)
    result = runner.invoke(cli.main, ["rate", two_step_file])
    assert result.exit_code == 4
