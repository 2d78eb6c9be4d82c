"""
Testes para a interface de linha de comando
"""

import json
from pathlib import Path

import pandas as pd
import pytest
import yaml
from click.testing import CliRunner

from src.netbandit.cli.main import EXIT_CONFIG, EXIT_RUNTIME, main
from src.netbandit.cli.reports import CSV_COLUMNS


SHIPPED_CONFIG = Path(__file__).resolve().parents[1] / "config.yaml"


@pytest.fixture
def runner() -> CliRunner:
    return CliRunner()


def _assert_same_outputs(first: Path, second: Path) -> None:
    names = sorted(p.name for p in first.iterdir())
    assert names == sorted(p.name for p in second.iterdir())
    for name in names:
        assert (first / name).read_bytes() == (second / name).read_bytes(), name


def _write_config(temp_dir: Path, data, name: str = "custom.yaml") -> Path:
    path = temp_dir / name
    path.write_text(yaml.safe_dump(data, sort_keys=False), encoding="utf-8")
    return path


class TestRunCommand:
    """Testes para o comando run"""

    def test_writes_regret_csv(self, runner, config_file: Path, temp_dir: Path):
        """Testa CSV com uma linha por (replicação, rodada) e resumo JSON"""
        out = temp_dir / "out"
        result = runner.invoke(main, ["run", str(config_file), "--out", str(out)])
        assert result.exit_code == 0, result.output
        frame = pd.read_csv(out / "regret.csv")
        assert list(frame.columns) == CSV_COLUMNS
        assert len(frame) == 5 * 3
        assert sorted(frame["rep"].unique()) == [0, 1, 2]
        summary = json.loads((out / "regret_summary.json").read_text(encoding="utf-8"))
        assert summary["arms"][0]["replications"] == 3
        assert "regret.csv" in summary["files"]

    def test_same_seed_identical_bytes(self, runner, config_file: Path, temp_dir: Path):
        """Testa que --seed 7 duas vezes gera arquivos idênticos byte a byte"""
        for name in ("a", "b"):
            result = runner.invoke(main, ["run", str(config_file), "--seed", "7",
                                          "--out", str(temp_dir / name)])
            assert result.exit_code == 0, result.output
        _assert_same_outputs(temp_dir / "a", temp_dir / "b")
        summary = json.loads((temp_dir / "a" / "regret_summary.json").read_text(encoding="utf-8"))
        assert "wall_time_s" not in summary["arms"][0]

    def test_timing_adds_wall_time(self, runner, temp_dir: Path, small_config_data):
        """Testa wall_time_s no resumo apenas com output.timing"""
        path = _write_config(temp_dir, dict(small_config_data, output={"timing": True}))
        result = runner.invoke(main, ["run", str(path), "--out", str(temp_dir / "out")])
        assert result.exit_code == 0, result.output
        summary = json.loads((temp_dir / "out" / "regret_summary.json").read_text(encoding="utf-8"))
        assert summary["arms"][0]["wall_time_s"] > 0

    def test_shipped_config_is_deterministic(self):
        """Testa que o config.yaml distribuído não grava tempos"""
        data = yaml.safe_load(SHIPPED_CONFIG.read_text(encoding="utf-8"))
        assert data["output"]["timing"] is False

    @pytest.mark.slow
    def test_shipped_config_identical_bytes(self, runner):
        """Testa config.yaml distribuído executado duas vezes: todos os arquivos iguais"""
        with runner.isolated_filesystem():
            Path("config.yaml").write_bytes(SHIPPED_CONFIG.read_bytes())
            for name in ("a", "b"):
                result = runner.invoke(main, ["run", "config.yaml", "--reps", "1", "--rounds", "2",
                                              "--jobs", "1", "--out", name])
                assert result.exit_code == 0, result.output
            _assert_same_outputs(Path("a"), Path("b"))

    def test_seed_changes_results(self, runner, config_file: Path, temp_dir: Path):
        """Testa que sementes diferentes mudam o CSV"""
        for name, seed in (("a", "7"), ("b", "8")):
            runner.invoke(main, ["run", str(config_file), "--seed", seed, "--out", str(temp_dir / name)])
        assert (temp_dir / "a" / "regret.csv").read_bytes() != (temp_dir / "b" / "regret.csv").read_bytes()

    def test_csv_path_output(self, runner, config_file: Path, temp_dir: Path):
        """Testa --out apontando para um arquivo .csv"""
        target = temp_dir / "runs" / "thompson.csv"
        result = runner.invoke(main, ["run", str(config_file), "--out", str(target)])
        assert result.exit_code == 0, result.output
        assert target.exists()
        assert (temp_dir / "runs" / "thompson_summary.json").exists()

    def test_overrides(self, runner, config_file: Path, temp_dir: Path):
        """Testa --reps e --rounds sobrepondo o arquivo"""
        out = temp_dir / "out"
        result = runner.invoke(main, ["run", str(config_file), "--reps", "2", "--rounds", "3",
                                      "--jobs", "2", "--out", str(out)])
        assert result.exit_code == 0, result.output
        assert len(pd.read_csv(out / "regret.csv")) == 6

    def test_missing_config(self, runner, temp_dir: Path):
        """Testa arquivo ausente: código 2 e caminho na mensagem"""
        missing = temp_dir / "ausente.yaml"
        result = runner.invoke(main, ["run", str(missing), "--out", str(temp_dir / "out")])
        assert result.exit_code == EXIT_CONFIG
        assert "ausente.yaml" in result.output

    def test_runtime_failure(self, runner, temp_dir: Path, small_config_data):
        """Testa código 3 quando todas as replicações falham"""
        data = dict(small_config_data, network={"n": 30, "k": 2},
                    solver={"agent_method": "bruteforce", "oracle_method": "local_search"})
        path = _write_config(temp_dir, data)
        result = runner.invoke(main, ["run", str(path), "--out", str(temp_dir / "out")])
        assert result.exit_code == EXIT_RUNTIME


class TestSweepCommand:
    """Testes para o comando sweep"""

    def test_budget_sweep_files(self, runner, config_file: Path, temp_dir: Path):
        """Testa um CSV por valor e um CSV combinado"""
        out = temp_dir / "sweep"
        result = runner.invoke(main, ["sweep", str(config_file), "--axis", "budget",
                                      "--values", "1,unlimited", "--reps", "2", "--out", str(out)])
        assert result.exit_code == 0, result.output
        assert len(pd.read_csv(out / "regret_budget-1.csv")) == 10
        assert (out / "regret_budget-unlimited.csv").exists()
        combined = pd.read_csv(out / "regret_budget.csv")
        assert list(combined.columns[:2]) == ["axis", "value"]
        assert len(combined) == 20
        assert (out / "regret_budget_summary.json").exists()

    def test_unknown_axis(self, runner, config_file: Path, temp_dir: Path):
        """Testa eixo desconhecido: código 2"""
        result = runner.invoke(main, ["sweep", str(config_file), "--axis", "rounds",
                                      "--values", "1,2", "--out", str(temp_dir / "out")])
        assert result.exit_code == EXIT_CONFIG

    def test_invalid_value(self, runner, config_file: Path, temp_dir: Path):
        """Testa valor inválido para o eixo: código 2"""
        result = runner.invoke(main, ["sweep", str(config_file), "--axis", "n",
                                      "--values", "oito", "--out", str(temp_dir / "out")])
        assert result.exit_code == EXIT_CONFIG


class TestValidateCommand:
    """Testes para o comando validate"""

    def test_protocol_dimensions(self, runner, temp_dir: Path):
        """Testa n=100: D = 10 + 16 = 26 e B = 20"""
        path = _write_config(temp_dir, {"network": {"n": 100},
                                        "logging": {"console_output": False}})
        result = runner.invoke(main, ["validate", str(path)])
        assert result.exit_code == 0, result.output
        assert "D = 10 + 16 = 26" in result.output
        assert "B = 20" in result.output

    def test_negative_sigma(self, runner, temp_dir: Path):
        """Testa sigma negativo: código 2"""
        path = _write_config(temp_dir, {"reward": {"noise_sigma": -1.0}})
        result = runner.invoke(main, ["validate", str(path)])
        assert result.exit_code == EXIT_CONFIG
        assert "sigma" in result.output

    def test_version(self, runner):
        """Testa --version"""
        result = runner.invoke(main, ["--version"])
        assert result.exit_code == 0
        assert "netbandit" in result.output
