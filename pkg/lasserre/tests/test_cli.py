# lasserre/tests/test_cli.py

import csv
import io
import json
from pathlib import Path

import pytest
from click.testing import CliRunner

from app.crud.stores import instance_store
from app.services.report import COLUMNS
from main import cli


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def instancia(runner, tmp_path):
    res = runner.invoke(cli, ["--out-dir", str(tmp_path), "gen", "--kind", "max-cut", "--family", "ring", "--n", "4"])
    assert res.exit_code == 0, res.output
    caminho = Path(res.stdout.strip())
    assert caminho == tmp_path / "instances" / "max-cut-ring-n4-s0.json"
    return caminho


def _run(runner, out_dir, instancia, *extra):
    return runner.invoke(
        cli,
        ["--out-dir", str(out_dir), "run", str(instancia), "--r", "1", "--trials", "3", *extra],
    )


def test_gen_e_deterministico(runner, tmp_path, instancia):
    outro = tmp_path / "outro.json"
    res = runner.invoke(
        cli,
        ["--out-dir", str(tmp_path), "gen", "--kind", "max-cut", "--family", "ring", "--n", "4",
         "--output", str(outro)],
    )
    assert res.exit_code == 0
    assert outro.read_bytes() == instancia.read_bytes()
    guardada = instance_store.obter(tmp_path, "max-cut-ring-n4-s0")
    assert guardada is not None and guardada.n == 4
    assert instance_store.contar(tmp_path) == 1


def test_run_grava_registro_e_tempos(runner, tmp_path, instancia):
    res = _run(runner, tmp_path, instancia)
    assert res.exit_code == 0, res.output
    registros = sorted((tmp_path / "records").glob("*.json"))
    assert len(registros) == 2
    principal = [c for c in registros if not c.name.endswith(".timings.json")]
    assert len(principal) == 1
    dados = json.loads(principal[0].read_text(encoding="utf-8"))
    assert dados["kind"] == "max-cut"
    assert dados["oracle_opt"] == 4.0
    assert {m["mode"] for m in dados["modes"]} == {"independent", "threshold"}


def test_execucoes_identicas_dao_bytes_identicos(runner, tmp_path, instancia):
    a, b = tmp_path / "a", tmp_path / "b"
    assert _run(runner, a, instancia).exit_code == 0
    assert runner.invoke(
        cli, ["--out-dir", str(b), "--threads", "2", "run", str(instancia), "--r", "1", "--trials", "3"]
    ).exit_code == 0
    nomes = [c.name for c in (a / "records").glob("*.json") if not c.name.endswith(".timings.json")]
    assert nomes
    for nome in nomes:
        assert (a / "records" / nome).read_bytes() == (b / "records" / nome).read_bytes()
    # regravar o mesmo registro não é conflito
    assert _run(runner, a, instancia).exit_code == 0


def test_varias_estrategias(runner, tmp_path, instancia):
    res = _run(runner, tmp_path, instancia, "--strategy", "greedy-colsel", "--strategy", "random")
    assert res.exit_code == 0, res.output
    assert len(res.stdout.strip().splitlines()) == 2


def test_trials_zero_e_erro_de_uso(runner, tmp_path, instancia):
    res = runner.invoke(cli, ["--out-dir", str(tmp_path), "run", str(instancia), "--r", "1", "--trials", "0"])
    assert res.exit_code == 2


def test_nivel_acima_de_n_e_erro_de_uso(runner, tmp_path, instancia):
    res = runner.invoke(cli, ["--out-dir", str(tmp_path), "run", str(instancia), "--r", "5"])
    assert res.exit_code == 2
    assert res.exception is None or isinstance(res.exception, SystemExit)
    registros = [c for c in (tmp_path / "records").glob("*.json") if not c.name.endswith(".timings.json")]
    assert len(registros) == 1
    dados = json.loads(registros[0].read_text(encoding="utf-8"))
    assert dados["error_code"] == 2
    assert "LevelBudgetError" in dados["error"]


def test_semente_negativa_e_erro_de_uso(runner, tmp_path, instancia):
    res = runner.invoke(cli, ["--seed", "-1", "--out-dir", str(tmp_path), "run", str(instancia), "--r", "1"])
    assert res.exit_code == 2


def test_familia_incompativel(runner, tmp_path):
    res = runner.invoke(
        cli,
        ["--out-dir", str(tmp_path), "gen", "--kind", "independent-set", "--family", "planted-bisection", "--n", "6"],
    )
    assert res.exit_code == 2


def test_gerador_acima_do_limite(runner, tmp_path):
    res = runner.invoke(cli, ["--out-dir", str(tmp_path), "gen", "--kind", "max-cut", "--family", "ring", "--n", "500"])
    assert res.exit_code == 4


def test_oracle(runner, tmp_path, instancia):
    res = runner.invoke(cli, ["--out-dir", str(tmp_path), "oracle", str(instancia)])
    assert res.exit_code == 0, res.output
    assert "opt=4.0" in res.stdout
    assert len(list((tmp_path / "oracle").glob("*.json"))) == 1


def test_report_csv_e_json(runner, tmp_path, instancia):
    assert _run(runner, tmp_path, instancia).exit_code == 0

    res = runner.invoke(cli, ["--out-dir", str(tmp_path), "report"])
    assert res.exit_code == 0, res.output
    linhas = list(csv.reader(io.StringIO(res.stdout)))
    assert linhas[0] == COLUMNS
    assert len(linhas) == 3
    assert {linha[COLUMNS.index("mode")] for linha in linhas[1:]} == {"independent", "threshold"}

    saida = tmp_path / "relatorio.json"
    padrao = str(tmp_path / "records" / "*.json")
    res = runner.invoke(cli, ["report", padrao, "--format", "json", "--output", str(saida)])
    assert res.exit_code == 0, res.output
    dados = json.loads(saida.read_text(encoding="utf-8"))
    assert [d["oracle_opt"] for d in dados] == [4.0, 4.0]


def test_report_sem_registros(runner, tmp_path):
    res = runner.invoke(cli, ["report", str(tmp_path / "nada" / "*.json")])
    assert res.exit_code == 2


def test_validate_da_solucao_guardada(runner, tmp_path, instancia):
    res = _run(runner, tmp_path, instancia, "--save-solution")
    assert res.exit_code == 0, res.output
    solucao = next(l for l in res.stdout.splitlines() if l.endswith(".npz"))
    res = runner.invoke(cli, ["validate", solucao])
    assert res.exit_code == 0, res.output
    assert json.loads(res.stdout)["violations"] == []
