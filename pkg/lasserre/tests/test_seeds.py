# lasserre/tests/test_seeds.py

import numpy as np
import pytest

from app.services.seeds import (
    score_of,
    select_exhaustive,
    select_greedy,
    select_random,
    select_seeds,
    select_volume,
)
from app.utils.enums import SeedStrategy
from app.utils.errors import CapacityError


def grupos(n: int, k: int):
    return [list(range(i * k, (i + 1) * k)) for i in range(n)]


def test_guloso_na_identidade_desempata_pelo_menor_indice():
    s = select_greedy(np.eye(4), grupos(4, 1), 2)
    assert s.variables == [0, 1]
    assert s.strategy == "greedy-colsel"
    assert s.score == pytest.approx(2.0)


def test_guloso_escolhe_a_coluna_dominante():
    V = np.array([[2.0, 0.0, 0.5], [0.0, 1.0, 0.5]])
    s = select_greedy(V, grupos(3, 1), 1)
    assert s.variables == [0]


def test_exaustivo_nunca_perde_para_o_guloso(rng):
    for _ in range(50):
        V = rng.normal(size=(4, 12))
        g = grupos(6, 2)
        for m in (1, 2):
            assert select_exhaustive(V, g, m).score <= select_greedy(V, g, m).score + 1e-9


def test_guloso_com_colunas_nulas_escolhe_variaveis_validas():
    s = select_greedy(np.zeros((3, 6)), grupos(3, 2), 2)
    assert s.variables == [0, 1]
    assert s.score == pytest.approx(0.0)


def test_guloso_com_residuo_zerado_no_meio():
    # depois da primeira escolha o resíduo é nulo: segue pelo menor índice livre
    V = np.zeros((2, 6))
    V[0, 2] = 1.0
    s = select_greedy(V, grupos(3, 2), 2)
    assert s.variables == [1, 0]
    assert s.score == pytest.approx(0.0, abs=1e-12)


def test_exaustivo_acima_do_limite():
    with pytest.raises(CapacityError):
        select_exhaustive(np.eye(10), grupos(10, 1), 5, cap=10)


def test_guloso_melhor_que_aleatorio_em_media(rng):
    gulosos, aleatorios = [], []
    for _ in range(100):
        base = rng.normal(size=(6, 2))
        V = base @ rng.normal(size=(2, 16)) + 0.05 * rng.normal(size=(6, 16))
        g = grupos(8, 2)
        gulosos.append(select_greedy(V, g, 1).score)
        aleatorios.append(select_random(V, g, 1, rng).score)
    assert np.mean(gulosos) <= np.mean(aleatorios)


def test_volume_completa_quando_o_residuo_zera():
    V = np.zeros((3, 4))
    V[0, 0] = 1.0
    s = select_volume(V, grupos(4, 1), 3, np.random.default_rng(0))
    assert s.variables == [0, 1, 2]
    assert s.strategy == "volume-sample-padded"
    assert s.score == pytest.approx(0.0)


def test_volume_sem_degeneracao(rng):
    s = select_volume(np.eye(5), grupos(5, 1), 3, rng)
    assert s.strategy == "volume-sample"
    assert len(set(s.variables)) == 3


def test_aleatorio_com_zero_sementes(rng):
    V = np.eye(3)
    s = select_random(V, grupos(3, 1), 0, rng)
    assert s.variables == []
    assert s.score == pytest.approx(3.0)


def test_quantidade_de_sementes_invalida():
    with pytest.raises(ValueError):
        select_greedy(np.eye(2), grupos(2, 1), 3)


def test_despacho_e_deterministico():
    V = np.random.default_rng(7).normal(size=(4, 8))
    g = grupos(4, 2)
    for estrategia in SeedStrategy:
        a = select_seeds(estrategia, V, g, 2, np.random.default_rng(3))
        b = select_seeds(estrategia, V, g, 2, np.random.default_rng(3))
        assert a.variables == b.variables
        assert a.score == pytest.approx(score_of(V, g, a.variables))
