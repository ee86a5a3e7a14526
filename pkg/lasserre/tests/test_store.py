# lasserre/tests/test_store.py

import json
import math

import pytest

from app.crud.base import read_model, write_canonical
from app.crud.stores import instance_store, oracle_store, record_store
from app.schemas import ModeSummary, OracleResult, RunRecord
from app.services.report import COLUMNS, build_rows, to_csv, to_json
from app.utils.enums import ProblemKind, RoundingMode
from app.utils.errors import StoreConflictError
from app.utils.serialization import canonical_dumps, format_float
from conftest import ciclo, spec_de


def registro(**campos) -> RunRecord:
    base = dict(
        instance_id="c5",
        instance_hash="a" * 64,
        config_hash="b" * 64,
        kind=ProblemKind.MAX_CUT,
        n=5,
        k=2,
        r=1,
        strategy="greedy-colsel",
        sdp_value=4.5225,
        converged=True,
        modes=[ModeSummary(mode=RoundingMode.INDEPENDENT, best_post_repair=4.0)],
        oracle_opt=4.0,
        trials=3,
        master_seed=0,
    )
    base.update(campos)
    return RunRecord(**base)


# ============================================================================
# JSON CANÔNICO
# ============================================================================

def test_json_canonico_ordena_chaves_e_fixa_floats():
    assert canonical_dumps({"b": 0.1, "a": 1}) == '{\n  "a": 1,\n  "b": 0.10000000000000001\n}\n'
    assert format_float(1.0) == "1.0"
    assert format_float(float("-inf")) == "-Infinity"


def test_infinito_volta_pelo_json():
    texto = canonical_dumps({"x": float("inf"), "y": float("nan")})
    dados = json.loads(texto)
    assert dados["x"] == float("inf")
    assert math.isnan(dados["y"])


# ============================================================================
# STORES
# ============================================================================

def test_gravacao_so_de_acrescimo(tmp_path):
    caminho = tmp_path / "x.json"
    write_canonical(caminho, {"a": 1})
    write_canonical(caminho, {"a": 1})
    with pytest.raises(StoreConflictError):
        write_canonical(caminho, {"a": 2})
    write_canonical(caminho, {"a": 2}, append_only=False)
    assert json.loads(caminho.read_text(encoding="utf-8")) == {"a": 2}


def test_store_de_registros(tmp_path):
    rec = registro()
    caminho = record_store.salvar(tmp_path, rec)
    assert caminho.name == f"{'a' * 16}-{'b' * 16}.json"
    record_store.salvar_tempos(tmp_path, rec, {"solve": 0.5})
    record_store.salvar_tempos(tmp_path, rec, {"solve": 0.7})

    assert record_store.contar(tmp_path) == 1
    assert record_store.obter(tmp_path, record_store.nome(rec)) == rec
    assert record_store.obter(tmp_path, "inexistente") is None
    assert record_store.obter_todos(tmp_path) == [rec]


def test_store_de_instancias_e_oraculo(tmp_path):
    spec = spec_de("max-cut", 5, ciclo(5))
    instance_store.criar(tmp_path, "c5", spec)
    assert instance_store.obter(tmp_path, "c5") == spec

    res = OracleResult(opt_value=float("inf"), witness=[0] * 5, enumerated=32, instance_hash="c" * 64)
    oracle_store.salvar(tmp_path, res)
    lido = read_model(tmp_path / "oracle" / f"{'c' * 16}.json", OracleResult)
    assert lido.opt_value == float("inf")


# ============================================================================
# RELATÓRIO
# ============================================================================

def test_linhas_do_relatorio():
    linhas = build_rows([registro(), registro(strategy="random", oracle_opt=None)])
    assert [l.strategy for l in linhas] == ["greedy-colsel", "random"]
    assert linhas[0].ratio_rounded_opt == pytest.approx(1.0)
    assert linhas[0].ratio_rounded_sdp == pytest.approx(4.0 / 4.5225)
    assert linhas[1].ratio_rounded_opt is None


def test_csv_deixa_celulas_vazias():
    texto = to_csv(build_rows([registro(oracle_opt=None)]))
    cabecalho, linha = texto.splitlines()
    assert cabecalho.split(",") == COLUMNS
    celulas = dict(zip(COLUMNS, linha.split(",")))
    assert celulas["oracle_opt"] == ""
    assert celulas["best_rounded"] == "4.0"


def test_json_do_relatorio():
    dados = json.loads(to_json(build_rows([registro()])))
    assert dados[0]["instance_id"] == "c5"
    assert set(dados[0]) == set(COLUMNS)
